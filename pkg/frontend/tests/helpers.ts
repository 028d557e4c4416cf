// Shared fixtures: a frozen snapshot of the demo server's palette and
// the scripted interaction that assembles the Titanic pipeline.

import {
  CanvasState,
  EditResult,
  addNode,
  connect,
  markOutput,
  newCanvas,
  setLiteral,
} from "../src/state.js";
import { LiteralValue, PaletteEntry, PortRef } from "../src/types.js";

// Must stay byte-for-byte in sync with GET /stubs of the demo project;
// the integration suite asserts the equality.
export const DEMO_PALETTE: PaletteEntry[] = [
  { name: "Column", kind: "class", params: [], results: [{ name: "result", type: "Column" }], schemaEffects: [], protocol: null },
  { name: "DecisionTree", kind: "class", params: [], results: [{ name: "result", type: "DecisionTree" }], schemaEffects: [], protocol: "fit predict*" },
  { name: "DecisionTree.fit", kind: "method", params: [{ name: "features", type: "Table", refined: false }, { name: "target", type: "Column", refined: false }], results: [], schemaEffects: [], protocol: null },
  { name: "DecisionTree.predict", kind: "method", params: [{ name: "features", type: "Table", refined: false }], results: [{ name: "result", type: "Column" }], schemaEffects: [], protocol: null },
  { name: "Table", kind: "class", params: [], results: [{ name: "result", type: "Table" }], schemaEffects: [], protocol: null },
  { name: "Table.getColumn", kind: "method", params: [{ name: "name", type: "String", refined: false }], results: [{ name: "result", type: "Column" }], schemaEffects: ["require self has column name"], protocol: null },
  { name: "Table.keepColumns", kind: "method", params: [{ name: "columnNames", type: "List<String>", refined: false }], results: [{ name: "result", type: "Table" }], schemaEffects: ["result = self.keep(columnNames)"], protocol: null },
  { name: "Table.removeColumns", kind: "method", params: [{ name: "columnNames", type: "List<String>", refined: false }], results: [{ name: "result", type: "Table" }], schemaEffects: ["result = self.drop(columnNames)"], protocol: null },
  { name: "Table.splitRows", kind: "method", params: [{ name: "ratio", type: "Float where {it > 0.0, it < 1.0}", refined: true }], results: [{ name: "train", type: "Table" }, { name: "test", type: "Table" }], schemaEffects: ["train = self", "test = self"], protocol: null },
  { name: "averageOf", kind: "function", params: [{ name: "table", type: "Table", refined: false }, { name: "column", type: "String", refined: false }], results: [{ name: "result", type: "Float" }], schemaEffects: ["require table has column column: Float"], protocol: null },
  { name: "loadDataset", kind: "function", params: [{ name: "name", type: "String", refined: false }], results: [{ name: "result", type: "Table" }], schemaEffects: ["result = external(name)"], protocol: null },
  { name: "transformTable", kind: "function", params: [{ name: "table", type: "Table", refined: false }, { name: "transformer", type: "(Table) -> (Table)", refined: false }], results: [{ name: "result", type: "Table" }], schemaEffects: [], protocol: null },
];

export function entry(palette: PaletteEntry[], name: string): PaletteEntry {
  const found = palette.find((e) => e.name === name);
  if (!found) throw new Error(`no palette entry named ${name}`);
  return found;
}

export function must(result: EditResult): CanvasState {
  if (!result.ok) throw new Error(`edit rejected: ${result.rule}`);
  return result.state;
}

export const TITANIC_CANONICAL = `pipeline predictTitanicSurvival {
    titanic = loadDataset("Titanic")
    useful = titanic.removeColumns(["name", "ticket", "cabin"])
    features = useful.keepColumns(["age", "fare", "pclass", "survived"])
    target = features.getColumn("survived")
    meanFare = averageOf(features, "fare")
    train, test = features.splitRows(0.8)
    model = DecisionTree()
    model.fit(train, target)
    prediction = model.predict(test)
}
`;

/** Assemble the Titanic pipeline purely through validated edit actions. */
export function buildTitanic(palette: PaletteEntry[]): CanvasState {
  let state = newCanvas("predictTitanicSurvival");
  const add = (name: string) => {
    state = must(addNode(state, entry(palette, name)));
    return state.graph.nodes[state.graph.nodes.length - 1].id;
  };
  const lit = (id: string, port: string, value: LiteralValue) => {
    state = must(setLiteral(state, id, port, value));
  };
  const wire = (from: PortRef, to: PortRef, varName: string) => {
    state = must(connect(state, palette, from, to, varName));
  };

  const load = add("loadDataset");
  lit(load, "name", "Titanic");
  const remove = add("Table.removeColumns");
  lit(remove, "columnNames", ["name", "ticket", "cabin"]);
  const keep = add("Table.keepColumns");
  lit(keep, "columnNames", ["age", "fare", "pclass", "survived"]);
  const getCol = add("Table.getColumn");
  lit(getCol, "name", "survived");
  const average = add("averageOf");
  lit(average, "column", "fare");
  const split = add("Table.splitRows");
  lit(split, "ratio", 0.8);
  const tree = add("DecisionTree");
  const fit = add("DecisionTree.fit");
  const predict = add("DecisionTree.predict");

  wire({ node: load, port: "result" }, { node: remove, port: "self" }, "titanic");
  wire({ node: remove, port: "result" }, { node: keep, port: "self" }, "useful");
  wire({ node: keep, port: "result" }, { node: getCol, port: "self" }, "features");
  wire({ node: keep, port: "result" }, { node: average, port: "table" }, "features");
  wire({ node: keep, port: "result" }, { node: split, port: "self" }, "features");
  wire({ node: tree, port: "result" }, { node: fit, port: "self" }, "model");
  wire({ node: split, port: "train" }, { node: fit, port: "features" }, "train");
  wire({ node: getCol, port: "result" }, { node: fit, port: "target" }, "target");
  wire({ node: tree, port: "result" }, { node: predict, port: "self" }, "model");
  wire({ node: split, port: "test" }, { node: predict, port: "features" }, "test");

  state = must(markOutput(state, { node: average, port: "result" }, "meanFare"));
  state = must(markOutput(state, { node: predict, port: "result" }, "prediction"));
  return state;
}
