import { buildExplodeForest, isRef, StepNode, StepRef } from "./explodeTree.js";
import type { CellResponse, ExplodeRow } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderNode(node: StepNode | StepRef): string {
  if (isRef(node)) {
    return `<li class="step-ref">see step #${node.ref}</li>`;
  }
  const { row, children } = node;
  const label =
    `<span class="idx">#${row.index}</span> ` +
    `<span class="rule">${escapeHtml(row.rule)}</span> ` +
    `<span class="goal">⊢ ${escapeHtml(row.goal)}</span>`;
  if (children.length === 0) {
    return `<li class="step" data-step="${row.index}">${label}</li>`;
  }
  const inner = children.map(renderNode).join("");
  // <details> gives native expand/collapse; collapsing is presentation only
  return (
    `<li class="step" data-step="${row.index}">` +
    `<details open><summary>${label}</summary>` +
    `<ul class="substeps">${inner}</ul></details></li>`
  );
}

/** Collapsible Fitch-style tree; every step appears exactly once. */
export function renderExplode(rows: ExplodeRow[]): string {
  const forest = buildExplodeForest(rows);
  return `<ul class="explode-tree">${forest.map(renderNode).join("")}</ul>`;
}

/** One cell's output pane (text, inline SVG image, or proof tree). */
export function renderCellOutput(response: CellResponse): string {
  if (response.status === "error") {
    return `<pre class="output error">${escapeHtml(response.output)}</pre>`;
  }
  if (response.display === "image" && response.image_svg) {
    return `<figure class="output image">${response.image_svg}</figure>`;
  }
  if (response.display === "explode" && response.explode) {
    return (
      `<div class="output explode"><p>${escapeHtml(response.output)}</p>` +
      renderExplode(response.explode) +
      `</div>`
    );
  }
  return `<pre class="output text">${escapeHtml(response.output)}</pre>`;
}
