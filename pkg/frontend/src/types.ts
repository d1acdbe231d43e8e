export type CellMode = "cas" | "cas-image" | "kernel";

export type CellStatus = "idle" | "running" | "done" | "error";

export interface ExplodeRow {
  index: number;
  depth: number;
  rule: string;
  args: number[];
  goal: string;
}

export interface CellResponse {
  output: string;
  display: "text" | "image" | "explode";
  image_svg?: string | null;
  explode?: ExplodeRow[] | null;
  status: "done" | "error";
  error?: string | null;
}

export interface CellState {
  source: string;
  mode: CellMode;
  status: CellStatus;
  response?: CellResponse;
}
