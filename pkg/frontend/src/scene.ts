// Pure view model: CanvasState -> Scene.  The DOM layer only draws
// what this computes, so the visual rules are testable without a
// browser.  Rendering never throws; invalid documents become a banner.

import { CanvasState, initialPosition, paramPorts, resolveEntry, resultPorts } from "./state.js";
import { GRAPH_FORMAT_VERSION, LiteralValue, PaletteEntry } from "./types.js";

export interface ScenePort {
  name: string;
  side: "left" | "right";
  connected: boolean;
  literal?: LiteralValue;
}

export interface SceneBox {
  id: string;
  label: string;
  x: number;
  y: number;
  ports: ScenePort[];
  literalsVisible: boolean;
  badges: string[];
  warning?: string;
}

export interface SceneArrow {
  from: { node: string; port: string };
  to: { node: string; port: string };
  label: string;
}

export interface SceneOutput {
  varName: string;
  from: { node: string; port: string };
}

export interface Scene {
  frameLabel: string;
  boxes: SceneBox[];
  arrows: SceneArrow[];
  outputCircles: SceneOutput[];
  banner?: string;
}

export function render(
  state: CanvasState,
  palette: PaletteEntry[],
  badges: Map<number, string[]> = new Map(),
): Scene {
  const { graph } = state;
  if (graph.version !== GRAPH_FORMAT_VERSION) {
    return {
      frameLabel: graph.pipelineName ?? "",
      boxes: [],
      arrows: [],
      outputCircles: [],
      banner: `unsupported graph format version ${graph.version}`,
    };
  }
  const boxes: SceneBox[] = graph.nodes.map((node) => {
    const entry = resolveEntry(palette, node);
    const position =
      state.layout.get(node.id) ?? initialPosition(node.index);
    const ports: ScenePort[] = [];
    if (entry) {
      for (const name of paramPorts(entry, node)) {
        ports.push({
          name,
          side: "left",
          connected: graph.edges.some(
            (e) => e.to.node === node.id && e.to.port === name,
          ),
          literal: node.literals[name],
        });
      }
      for (const name of resultPorts(entry)) {
        ports.push({
          name,
          side: "right",
          connected:
            graph.edges.some(
              (e) => e.from.node === node.id && e.from.port === name,
            ) ||
            graph.outputs.some(
              (o) => o.from.node === node.id && o.from.port === name,
            ),
        });
      }
    }
    return {
      id: node.id,
      label: node.processName,
      x: position.x,
      y: position.y,
      ports,
      // literals stay hidden until the process is clicked
      literalsVisible: state.selection === node.id,
      badges: badges.get(node.index) ?? [],
      warning: entry ? undefined : "unknown process",
    };
  });
  return {
    frameLabel: graph.pipelineName,
    boxes,
    arrows: graph.edges.map((e) => ({
      from: e.from,
      to: e.to,
      label: e.varName,
    })),
    // dangling results render as blank circles
    outputCircles: graph.outputs.map((o) => ({
      varName: o.varName,
      from: o.from,
    })),
  };
}
