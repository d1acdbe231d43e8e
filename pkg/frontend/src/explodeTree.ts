import type { ExplodeRow } from "./types.js";

/** A proof-step node. Every row owns exactly one full node; extra
 * references to the same step become `ref` leaves pointing at its index,
 * so shared subproofs stay readable. */
export interface StepNode {
  row: ExplodeRow;
  children: (StepNode | StepRef)[];
}

export interface StepRef {
  ref: number;
}

export function isRef(node: StepNode | StepRef): node is StepRef {
  return (node as StepRef).ref !== undefined;
}

/**
 * Arrange rows into a forest: each step's arguments are its children; a
 * step already claimed by an earlier parent appears as a reference leaf.
 * Roots are the steps nobody references (the final goal last).
 */
export function buildExplodeForest(rows: ExplodeRow[]): StepNode[] {
  const byIndex = new Map<number, ExplodeRow>();
  for (const row of rows) {
    byIndex.set(row.index, row);
  }
  const claimed = new Set<number>();

  function build(index: number): StepNode {
    const row = byIndex.get(index);
    if (row === undefined) {
      throw new Error(`step ${index} missing from explode rows`);
    }
    claimed.add(index);
    const children = row.args.map((arg) =>
      claimed.has(arg) ? { ref: arg } : build(arg),
    );
    return { row, children };
  }

  const referenced = new Set<number>();
  for (const row of rows) {
    for (const arg of row.args) {
      referenced.add(arg);
    }
  }
  const roots: StepNode[] = [];
  for (const row of rows) {
    if (!referenced.has(row.index) && !claimed.has(row.index)) {
      roots.push(build(row.index));
    }
  }
  return roots;
}

/** Indices of all full nodes in the forest (each exactly once). */
export function fullNodeIndices(forest: StepNode[]): number[] {
  const out: number[] = [];
  const walk = (node: StepNode): void => {
    out.push(node.row.index);
    for (const child of node.children) {
      if (!isRef(child)) {
        walk(child);
      }
    }
  };
  forest.forEach(walk);
  return out.sort((a, b) => a - b);
}
