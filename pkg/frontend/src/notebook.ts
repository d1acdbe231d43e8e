import { SessionClient } from "./api.js";
import type { CellMode, CellResponse, CellState } from "./types.js";

/** Notebook state machine: cells run strictly in order, one in flight;
 * outputs are immutable once a cell is done. */
export class Notebook {
  readonly cells: CellState[] = [];
  private running = false;

  constructor(private readonly client: SessionClient) {}

  addCell(source: string, mode: CellMode = "cas"): number {
    this.cells.push({ source, mode, status: "idle" });
    return this.cells.length - 1;
  }

  async runCell(index: number): Promise<CellResponse> {
    if (this.running) {
      throw new Error("a cell is already running");
    }
    const cell = this.cells[index];
    if (cell === undefined) {
      throw new Error(`no cell ${index}`);
    }
    this.running = true;
    cell.status = "running";
    try {
      const response = await this.client.runCell(cell.source, cell.mode);
      cell.response = response;
      cell.status = response.status === "error" ? "error" : "done";
      return response;
    } catch (error) {
      cell.status = "error";
      cell.response = {
        output: String(error),
        display: "text",
        status: "error",
        error: String(error),
      };
      return cell.response;
    } finally {
      this.running = false;
    }
  }

  /** Run every cell top to bottom; later cells still run after errors. */
  async runAll(): Promise<CellResponse[]> {
    const outputs: CellResponse[] = [];
    for (let i = 0; i < this.cells.length; i += 1) {
      outputs.push(await this.runCell(i));
    }
    return outputs;
  }
}
