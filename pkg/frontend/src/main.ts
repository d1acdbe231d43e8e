import { SessionClient } from "./api.js";
import { Notebook } from "./notebook.js";
import { renderCellOutput } from "./render.js";
import type { CellMode } from "./types.js";

/** Minimal DOM wiring; all rendering logic lives in the pure modules. */
export function mount(root: HTMLElement, baseUrl = ""): Notebook {
  const notebook = new Notebook(new SessionClient(baseUrl));
  const list = document.createElement("div");
  list.className = "cells";
  const controls = document.createElement("div");
  controls.className = "controls";
  controls.innerHTML = `
    <textarea class="source" rows="2"
      placeholder='Factor["(x^2-2*x+1)"]'></textarea>
    <select class="mode">
      <option value="cas">cas</option>
      <option value="cas-image">cas-image</option>
      <option value="kernel">kernel</option>
    </select>
    <button class="run">run</button>`;
  root.append(list, controls);

  const sourceBox = controls.querySelector(".source") as HTMLTextAreaElement;
  const modeBox = controls.querySelector(".mode") as HTMLSelectElement;
  const runButton = controls.querySelector(".run") as HTMLButtonElement;

  runButton.addEventListener("click", async () => {
    const source = sourceBox.value.trim();
    if (!source) {
      return;
    }
    const index = notebook.addCell(source, modeBox.value as CellMode);
    const pane = document.createElement("section");
    pane.className = "cell";
    pane.innerHTML = `<pre class="cell-source">${source}</pre>` +
      `<div class="cell-output">running…</div>`;
    list.append(pane);
    runButton.disabled = true;
    try {
      const response = await notebook.runCell(index);
      const output = pane.querySelector(".cell-output") as HTMLElement;
      output.innerHTML = renderCellOutput(response);
    } finally {
      runButton.disabled = false;
      sourceBox.value = "";
    }
  });
  return notebook;
}

declare global {
  interface Window {
    casbridgeNotebook?: Notebook;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("notebook");
  if (root) {
    window.casbridgeNotebook = mount(root);
  }
}
