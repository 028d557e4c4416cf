// Mirrors the server's graph-document format, version 1.

export const GRAPH_FORMAT_VERSION = 1;

export interface PortRef {
  node: string;
  port: string;
}

export type LiteralValue =
  | string
  | number
  | boolean
  | null
  | LiteralValue[];

export interface GraphNode {
  id: string;
  processName: string;
  kind: "function" | "method";
  index: number;
  receiverVar?: string;
  literals: Record<string, LiteralValue>;
  lambdaSources: Record<string, string>;
}

export interface GraphEdge {
  from: PortRef;
  to: PortRef;
  varName: string;
}

export interface GraphOutput {
  from: PortRef;
  varName: string;
}

export interface GraphDoc {
  version: number;
  pipelineName: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
  outputs: GraphOutput[];
}

export interface Diagnostic {
  code: string;
  severity: "error" | "warning";
  message: string;
  file: string;
  startLine: number;
  startCol: number;
  endLine: number;
  endCol: number;
}

export interface PaletteParam {
  name: string;
  type: string;
  refined: boolean;
}

export interface PaletteResult {
  name: string;
  type: string;
}

// Sourced solely from GET /stubs; never hand-entered.
export interface PaletteEntry {
  name: string;
  kind: "function" | "class" | "method";
  params: PaletteParam[];
  results: PaletteResult[];
  schemaEffects: string[];
  protocol: string | null;
}

export function emptyGraph(pipelineName: string): GraphDoc {
  return {
    version: GRAPH_FORMAT_VERSION,
    pipelineName,
    nodes: [],
    edges: [],
    outputs: [],
  };
}
