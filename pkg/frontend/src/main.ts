// Application wiring: palette sidebar, SVG canvas, text panel, toasts.

import { ApiClient } from "./api.js";
import { badgesForDiagnostics } from "./badges.js";
import { render } from "./scene.js";
import { drawScene } from "./dom.js";
import {
  CanvasState,
  EditResult,
  addNode,
  connect,
  newCanvas,
  replaceGraph,
  select,
} from "./state.js";
import { Diagnostic, PaletteEntry } from "./types.js";

const api = new ApiClient("");

let state: CanvasState = newCanvas("myPipeline");
let palette: PaletteEntry[] = [];
let lastSource = "";
let lastDiagnostics: Diagnostic[] = [];
let pendingFrom: { node: string; port: string } | null = null;

function toast(message: string): void {
  const box = document.getElementById("toast")!;
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 2500);
}

function apply(result: EditResult): void {
  if (result.ok) {
    state = result.state;
    redraw();
  } else {
    toast(result.rule);
  }
}

function redraw(): void {
  const svg = document.getElementById("canvas") as unknown as SVGSVGElement;
  const badges = badgesForDiagnostics(lastDiagnostics, lastSource);
  drawScene(svg, render(state, palette, badges), {
    onSelect(nodeId) {
      state = select(state, nodeId);
      redraw();
    },
    onMove(nodeId, x, y) {
      state.layout.set(nodeId, { x, y });
      redraw();
    },
    onConnect(from, to) {
      const varName = prompt("variable name for this edge?") ?? "value";
      apply(connect(state, palette, from, to, varName));
    },
  });
  const diagList = document.getElementById("diagnostics")!;
  diagList.replaceChildren(
    ...lastDiagnostics.map((d) => {
      const item = document.createElement("li");
      item.textContent = `${d.startLine}:${d.startCol} ${d.severity}[${d.code}] ${d.message}`;
      return item;
    }),
  );
}

function renderPalette(): void {
  const list = document.getElementById("palette")!;
  list.replaceChildren(
    ...palette.map((entry) => {
      const item = document.createElement("li");
      item.textContent = `${entry.name} (${entry.kind})`;
      item.title = [
        ...entry.schemaEffects,
        ...(entry.protocol ? [`protocol ${entry.protocol}`] : []),
      ].join("\n");
      item.addEventListener("click", () => apply(addNode(state, entry)));
      return item;
    }),
  );
}

async function syncToText(): Promise<void> {
  const response = await api.graphToText(state.graph);
  const panel = document.getElementById("source") as HTMLTextAreaElement;
  lastDiagnostics = response.body.diagnostics;
  if (response.ok) {
    panel.value = response.body.source;
    lastSource = response.body.source;
    state = { ...state, dirty: false };
  } else {
    toast(`sync failed: ${lastDiagnostics[0]?.code ?? response.status}`);
  }
  redraw();
}

async function syncFromText(): Promise<void> {
  const panel = document.getElementById("source") as HTMLTextAreaElement;
  lastSource = panel.value;
  const checked = await api.check(lastSource);
  lastDiagnostics = checked.body.diagnostics;
  if (lastDiagnostics.some((d) => d.severity === "error")) {
    toast("source has errors; showing badges");
    redraw();
    return;
  }
  const response = await api.graphFromText(lastSource);
  if (response.ok) {
    state = replaceGraph(state, response.body.graph);
  } else {
    toast(`cannot build graph: ${response.body.diagnostics[0]?.code}`);
  }
  redraw();
}

async function boot(): Promise<void> {
  const stubs = await api.stubs();
  palette = stubs.body.stubs;
  renderPalette();
  document
    .getElementById("to-text")!
    .addEventListener("click", () => void syncToText());
  document
    .getElementById("from-text")!
    .addEventListener("click", () => void syncFromText());
  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const port = target.closest?.("[data-port]") as HTMLElement | null;
    if (!port) return;
    const ref = {
      node: port.getAttribute("data-node")!,
      port: port.getAttribute("data-port")!,
    };
    if (pendingFrom === null && port.getAttribute("data-side") === "right") {
      pendingFrom = ref;
      toast(`connecting from ${ref.node}.${ref.port}…`);
    } else if (pendingFrom) {
      const varName = prompt("variable name for this edge?") ?? "value";
      apply(connect(state, palette, pendingFrom, ref, varName));
      pendingFrom = null;
    }
  });
  redraw();
}

void boot();
