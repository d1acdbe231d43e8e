import { describe, expect, it } from "vitest";
import {
  buildExplodeForest,
  fullNodeIndices,
  isRef,
} from "../src/explodeTree.js";
import type { ExplodeRow } from "../src/types.js";
import paperCell from "./fixtures/paper_explode.json";

const paperRows = paperCell.explode as ExplodeRow[];

describe("buildExplodeForest", () => {
  it("gives every step exactly one full node", () => {
    const forest = buildExplodeForest(paperRows);
    const indices = fullNodeIndices(forest);
    expect(indices).toEqual(paperRows.map((r) => r.index));
  });

  it("children follow the argument references", () => {
    const rows: ExplodeRow[] = [
      { index: 0, depth: 1, rule: "assumption", args: [], goal: "P" },
      { index: 1, depth: 1, rule: "h", args: [0], goal: "P" },
      { index: 2, depth: 0, rule: "→I", args: [0, 1], goal: "P → P" },
    ];
    const [root] = buildExplodeForest(rows);
    expect(root.row.index).toBe(2);
    expect(root.children).toHaveLength(2);
    const [first, second] = root.children;
    expect(isRef(first)).toBe(false);
    if (!isRef(first)) {
      expect(first.row.index).toBe(0);
    }
    // step 0 is already owned by the reference chain through step 1
    expect(isRef(second) || (second as any).row.index === 1).toBe(true);
  });

  it("shared steps become reference leaves, not duplicates", () => {
    const rows: ExplodeRow[] = [
      { index: 0, depth: 0, rule: "assumption", args: [], goal: "A" },
      { index: 1, depth: 0, rule: "use", args: [0], goal: "B" },
      { index: 2, depth: 0, rule: "use", args: [0], goal: "C" },
      { index: 3, depth: 0, rule: "join", args: [1, 2], goal: "D" },
    ];
    const forest = buildExplodeForest(rows);
    expect(fullNodeIndices(forest)).toEqual([0, 1, 2, 3]);
    const refs: number[] = [];
    const walk = (node: any): void => {
      for (const child of node.children ?? []) {
        if (child.ref !== undefined) {
          refs.push(child.ref);
        } else {
          walk(child);
        }
      }
    };
    forest.forEach(walk);
    expect(refs).toEqual([0]);
  });

  it("the final goal is a root", () => {
    const forest = buildExplodeForest(paperRows);
    const rootIndices = forest.map((n) => n.row.index);
    expect(rootIndices).toContain(paperRows[paperRows.length - 1].index);
  });
});
