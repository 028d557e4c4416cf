// Browser drawing layer: paints a Scene into an SVG element and wires
// basic interactions (select node, drag to move, connect ports).

import { Scene, SceneBox } from "./scene.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const BOX_WIDTH = 150;
const ROW_HEIGHT = 18;

export interface DomCallbacks {
  onSelect(nodeId: string | null): void;
  onMove(nodeId: string, x: number, y: number): void;
  onConnect(
    from: { node: string; port: string },
    to: { node: string; port: string },
  ): void;
}

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function portPosition(
  box: SceneBox,
  port: string,
): { x: number; y: number } {
  const index = box.ports.findIndex((p) => p.name === port);
  const entry = box.ports[index];
  const sameSideBefore = box.ports
    .slice(0, index)
    .filter((p) => p.side === entry?.side).length;
  const y = box.y + 26 + sameSideBefore * ROW_HEIGHT;
  const x = entry?.side === "right" ? box.x + BOX_WIDTH : box.x;
  return { x, y };
}

export function drawScene(
  svg: SVGSVGElement,
  scene: Scene,
  callbacks: DomCallbacks,
): void {
  svg.replaceChildren();
  if (scene.banner) {
    const banner = el("text", { x: "16", y: "24", class: "banner" });
    banner.textContent = scene.banner;
    svg.appendChild(banner);
    return;
  }
  const frame = el("text", { x: "12", y: "18", class: "frame-label" });
  frame.textContent = `pipeline ${scene.frameLabel}`;
  svg.appendChild(frame);

  const boxesById = new Map(scene.boxes.map((b) => [b.id, b]));
  for (const arrow of scene.arrows) {
    const from = boxesById.get(arrow.from.node);
    const to = boxesById.get(arrow.to.node);
    if (!from || !to) continue;
    const a = portPosition(from, arrow.from.port);
    const b = portPosition(to, arrow.to.port);
    svg.appendChild(
      el("line", {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        class: "edge",
        "marker-end": "url(#arrowhead)",
      }),
    );
    const label = el("text", {
      x: String((a.x + b.x) / 2),
      y: String((a.y + b.y) / 2 - 4),
      class: "edge-label",
    });
    label.textContent = arrow.label;
    svg.appendChild(label);
  }

  for (const box of scene.boxes) {
    const group = el("g", { "data-node": box.id });
    const leftRows = box.ports.filter((p) => p.side === "left").length;
    const rightRows = box.ports.filter((p) => p.side === "right").length;
    const height = 34 + Math.max(leftRows, rightRows, 1) * ROW_HEIGHT;
    group.appendChild(
      el("rect", {
        x: String(box.x),
        y: String(box.y),
        rx: "10",
        width: String(BOX_WIDTH),
        height: String(height),
        class: box.warning ? "node warning" : "node",
      }),
    );
    const title = el("text", {
      x: String(box.x + BOX_WIDTH / 2),
      y: String(box.y + 16),
      class: "node-label",
      "text-anchor": "middle",
    });
    title.textContent = box.label;
    group.appendChild(title);
    for (const code of box.badges) {
      const badge = el("text", {
        x: String(box.x + BOX_WIDTH - 8),
        y: String(box.y - 4),
        class: "badge",
        "text-anchor": "end",
      });
      badge.textContent = code;
      group.appendChild(badge);
    }
    for (const port of box.ports) {
      const { x, y } = portPosition(box, port.name);
      const circle = el("circle", {
        cx: String(x),
        cy: String(y),
        r: "5",
        class: port.connected ? "port connected" : "port",
        "data-node": box.id,
        "data-port": port.name,
        "data-side": port.side,
      });
      group.appendChild(circle);
      if (box.literalsVisible && port.literal !== undefined) {
        const literal = el("text", {
          x: String(x + 10),
          y: String(y + 4),
          class: "literal",
        });
        literal.textContent = `${port.name} = ${JSON.stringify(port.literal)}`;
        group.appendChild(literal);
      }
    }
    group.addEventListener("click", (event) => {
      event.stopPropagation();
      callbacks.onSelect(box.id);
    });
    attachDrag(group, box, callbacks);
    svg.appendChild(group);
  }

  for (const [i, output] of scene.outputCircles.entries()) {
    const from = boxesById.get(output.from.node);
    const origin = from
      ? portPosition(from, output.from.port)
      : { x: 20, y: 40 + i * 30 };
    const circle = el("circle", {
      cx: String(origin.x + 40),
      cy: String(origin.y),
      r: "7",
      class: "output-circle",
    });
    svg.appendChild(circle);
    const label = el("text", {
      x: String(origin.x + 52),
      y: String(origin.y + 4),
      class: "edge-label",
    });
    label.textContent = output.varName;
    svg.appendChild(label);
  }

  svg.addEventListener("click", () => callbacks.onSelect(null));
}

function attachDrag(
  group: SVGElement,
  box: SceneBox,
  callbacks: DomCallbacks,
): void {
  let start: { x: number; y: number } | null = null;
  group.addEventListener("pointerdown", (event) => {
    start = { x: event.clientX - box.x, y: event.clientY - box.y };
  });
  group.addEventListener("pointermove", (event) => {
    if (!start) return;
    callbacks.onMove(box.id, event.clientX - start.x, event.clientY - start.y);
  });
  group.addEventListener("pointerup", () => {
    start = null;
  });
}
