// Service payload shapes (fixed field-name contract of the HTTP API).

export type CellCode = "N" | "S" | "I" | "";

export interface RelationsPayload {
  cached?: boolean;
  relations: {
    necessary: CellCode[][];
    strict: CellCode[][];
    incomparable: CellCode[][];
    d_pairs: [string, string][];
  };
}

export interface FunctionPayload {
  label: string;
  marginals: Record<string, [number, number][]>;
}

export interface RepresentativesPayload {
  cached?: boolean;
  sufficient: { r: number; iteration_log: number[] };
  minimality: { t: number; z_star: number };
  discriminant: {
    epsilon_star: number;
    functions: FunctionPayload[];
    coverage: { a: string; b: string; functions: string[] }[];
  };
}

export interface ExplanationPayload {
  pair: [string, string];
  function: string;
  margin: number;
  a_marginals: Record<string, number>;
  b_marginals: Record<string, number>;
  differing: { criterion: string; gap: number }[];
}

export interface SessionPayload {
  id: string;
  alternatives: string[];
  criteria: string[];
  statements: StatementRecord[];
}

export interface StatementRecord {
  index: number;
  kind: "strict" | "indifference";
  a: string;
  b: string;
}

export interface ApiError {
  status: number;
  detail: string;
  rejected?: string;
}
