// Canvas state and the validated edit actions.
//
// Every mutation of the graph goes through one of the actions below;
// structurally invalid edits are rejected with the name of the violated
// rule so syntax errors are unconstructible from the canvas.

import {
  GraphDoc,
  GraphNode,
  LiteralValue,
  PaletteEntry,
  PortRef,
  emptyGraph,
} from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export interface CanvasState {
  graph: GraphDoc;
  layout: Map<string, Point>;
  selection: string | null;
  dirty: boolean;
}

export type EditResult =
  | { ok: true; state: CanvasState }
  | { ok: false; rule: string };

export function newCanvas(pipelineName: string): CanvasState {
  return {
    graph: emptyGraph(pipelineName),
    layout: new Map(),
    selection: null,
    dirty: false,
  };
}

const RECEIVER_PORT = "self";

/** Find the palette entry describing a node's process. */
export function resolveEntry(
  palette: PaletteEntry[],
  node: GraphNode,
): PaletteEntry | null {
  if (node.kind === "function") {
    // constructors appear as "function" nodes named after the class
    return (
      palette.find(
        (e) =>
          (e.kind === "function" || e.kind === "class") &&
          e.name === node.processName,
      ) ?? null
    );
  }
  return (
    palette.find(
      (e) => e.kind === "method" && e.name.endsWith(`.${node.processName}`),
    ) ?? null
  );
}

export function paramPorts(entry: PaletteEntry, node: GraphNode): string[] {
  const ports = entry.params.map((p) => p.name);
  return node.kind === "method" ? [RECEIVER_PORT, ...ports] : ports;
}

export function resultPorts(entry: PaletteEntry): string[] {
  return entry.results.map((r) => r.name);
}

function reject(rule: string): EditResult {
  return { ok: false, rule };
}

function accept(state: CanvasState): EditResult {
  return { ok: true, state: { ...state, dirty: true } };
}

export function addNode(
  state: CanvasState,
  entry: PaletteEntry,
  position?: Point,
): EditResult {
  const id = freshNodeId(state.graph);
  const node: GraphNode = {
    id,
    processName:
      entry.kind === "method"
        ? entry.name.slice(entry.name.indexOf(".") + 1)
        : entry.name,
    kind: entry.kind === "method" ? "method" : "function",
    index: state.graph.nodes.length,
    literals: {},
    lambdaSources: {},
  };
  const layout = new Map(state.layout);
  layout.set(id, position ?? initialPosition(node.index));
  return accept({
    ...state,
    graph: { ...state.graph, nodes: [...state.graph.nodes, node] },
    layout,
  });
}

function freshNodeId(graph: GraphDoc): string {
  let n = graph.nodes.length;
  while (graph.nodes.some((node) => node.id === `n${n}`)) n += 1;
  return `n${n}`;
}

/** Simple left-to-right initial placement. */
export function initialPosition(index: number): Point {
  return { x: 40 + index * 190, y: 80 };
}

export function connect(
  state: CanvasState,
  palette: PaletteEntry[],
  from: PortRef,
  to: PortRef,
  varName: string,
): EditResult {
  const { graph } = state;
  const fromNode = graph.nodes.find((n) => n.id === from.node);
  const toNode = graph.nodes.find((n) => n.id === to.node);
  if (!fromNode || !toNode) return reject("unknown node");
  const fromEntry = resolveEntry(palette, fromNode);
  const toEntry = resolveEntry(palette, toNode);
  if (!fromEntry || !toEntry) return reject("unknown process");
  if (!resultPorts(fromEntry).includes(from.port)) {
    return reject("source must be a result port");
  }
  if (!paramPorts(toEntry, toNode).includes(to.port)) {
    return reject("target must be a parameter port");
  }
  if (
    graph.edges.some((e) => e.to.node === to.node && e.to.port === to.port)
  ) {
    return reject("input already connected");
  }
  if (Object.prototype.hasOwnProperty.call(toNode.literals, to.port)) {
    return reject("port already holds a literal");
  }
  if (createsCycle(graph, from.node, to.node)) {
    return reject("cycle");
  }
  const existing = graph.edges.find(
    (e) => e.from.node === from.node && e.from.port === from.port,
  );
  if (existing && existing.varName !== varName) {
    return reject("result already named differently");
  }
  const nodes =
    to.port === RECEIVER_PORT
      ? graph.nodes.map((n) =>
          n.id === to.node ? { ...n, receiverVar: varName } : n,
        )
      : graph.nodes;
  return accept({
    ...state,
    graph: {
      ...graph,
      nodes,
      edges: [...graph.edges, { from, to, varName }],
    },
  });
}

function createsCycle(graph: GraphDoc, from: string, to: string): boolean {
  if (from === to) return true;
  // would `to` reach back to `from` through existing edges?
  const successors = new Map<string, string[]>();
  for (const e of graph.edges) {
    const list = successors.get(e.from.node) ?? [];
    list.push(e.to.node);
    successors.set(e.from.node, list);
  }
  const stack = [to];
  const seen = new Set<string>();
  while (stack.length > 0) {
    const current = stack.pop()!;
    if (current === from) return true;
    if (seen.has(current)) continue;
    seen.add(current);
    stack.push(...(successors.get(current) ?? []));
  }
  return false;
}

export function setLiteral(
  state: CanvasState,
  nodeId: string,
  port: string,
  value: LiteralValue,
): EditResult {
  const node = state.graph.nodes.find((n) => n.id === nodeId);
  if (!node) return reject("unknown node");
  if (
    state.graph.edges.some(
      (e) => e.to.node === nodeId && e.to.port === port,
    )
  ) {
    return reject("port already connected");
  }
  const updated = {
    ...node,
    literals: { ...node.literals, [port]: value },
  };
  return accept({
    ...state,
    graph: {
      ...state.graph,
      nodes: state.graph.nodes.map((n) => (n.id === nodeId ? updated : n)),
    },
  });
}

export function renameEdgeVariable(
  state: CanvasState,
  from: PortRef,
  varName: string,
): EditResult {
  if (!/^[a-z][A-Za-z0-9]*$/.test(varName)) {
    return reject("invalid variable name");
  }
  let found = false;
  const edges = state.graph.edges.map((e) => {
    if (e.from.node === from.node && e.from.port === from.port) {
      found = true;
      return { ...e, varName };
    }
    return e;
  });
  const outputs = state.graph.outputs.map((o) => {
    if (o.from.node === from.node && o.from.port === from.port) {
      found = true;
      return { ...o, varName };
    }
    return o;
  });
  if (!found) return reject("unknown edge");
  return accept({ ...state, graph: { ...state.graph, edges, outputs } });
}

/** Expose a result as a pipeline output (a blank circle in the view). */
export function markOutput(
  state: CanvasState,
  from: PortRef,
  varName: string,
): EditResult {
  if (
    state.graph.outputs.some(
      (o) => o.from.node === from.node && o.from.port === from.port,
    )
  ) {
    return reject("already an output");
  }
  return accept({
    ...state,
    graph: {
      ...state.graph,
      outputs: [...state.graph.outputs, { from, varName }],
    },
  });
}

export function deleteNode(state: CanvasState, nodeId: string): EditResult {
  if (!state.graph.nodes.some((n) => n.id === nodeId)) {
    return reject("unknown node");
  }
  const nodes = state.graph.nodes
    .filter((n) => n.id !== nodeId)
    .map((n, index) => ({ ...n, index }));
  const layout = new Map(state.layout);
  layout.delete(nodeId);
  return accept({
    ...state,
    graph: {
      ...state.graph,
      nodes,
      edges: state.graph.edges.filter(
        (e) => e.from.node !== nodeId && e.to.node !== nodeId,
      ),
      outputs: state.graph.outputs.filter((o) => o.from.node !== nodeId),
    },
    layout,
    selection: state.selection === nodeId ? null : state.selection,
  });
}

export function select(
  state: CanvasState,
  nodeId: string | null,
): CanvasState {
  return { ...state, selection: nodeId };
}

/** Replace the graph (after sync-from-text), keeping surviving layout. */
export function replaceGraph(
  state: CanvasState,
  graph: GraphDoc,
): CanvasState {
  const layout = new Map<string, Point>();
  for (const node of graph.nodes) {
    layout.set(
      node.id,
      state.layout.get(node.id) ?? initialPosition(node.index),
    );
  }
  return { graph, layout, selection: null, dirty: false };
}
