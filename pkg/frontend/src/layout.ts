// Layout lives in a sidecar document (`<pipeline>.layout.json`), never
// in the graph itself: positions must not affect what syncs to text.

import { GraphDoc } from "./types.js";
import { Point, initialPosition } from "./state.js";

export interface LayoutDoc {
  version: 1;
  positions: Record<string, Point>;
}

export function serializeLayout(layout: Map<string, Point>): string {
  const positions: Record<string, Point> = {};
  for (const id of [...layout.keys()].sort()) {
    positions[id] = layout.get(id)!;
  }
  const doc: LayoutDoc = { version: 1, positions };
  return JSON.stringify(doc, null, 2) + "\n";
}

export function deserializeLayout(
  text: string,
  graph: GraphDoc,
): Map<string, Point> {
  const layout = new Map<string, Point>();
  let doc: LayoutDoc | null = null;
  try {
    doc = JSON.parse(text) as LayoutDoc;
  } catch {
    doc = null;
  }
  const positions = doc && doc.version === 1 ? doc.positions : {};
  // invariant: layout keys are a subset of graph node ids
  for (const node of graph.nodes) {
    layout.set(node.id, positions[node.id] ?? initialPosition(node.index));
  }
  return layout;
}
