// Map server diagnostics (line-based) onto graph nodes (index-based).
//
// Statements inside the pipeline braces correspond 1:1, in order, to
// node indexes, so a diagnostic on the k-th statement badges node k.

import { Diagnostic } from "./types.js";

/** Line numbers (1-based) of the statements inside the pipeline body. */
export function statementLines(source: string): number[] {
  const lines = source.split("\n");
  const result: number[] = [];
  let depth = 0;
  for (let i = 0; i < lines.length; i += 1) {
    const line = lines[i];
    const stripped = line.trim();
    const opens = (line.match(/\{/g) ?? []).length;
    const closes = (line.match(/\}/g) ?? []).length;
    if (
      depth >= 1 &&
      stripped !== "" &&
      !stripped.startsWith("//") &&
      !(stripped === "}" || stripped.startsWith("pipeline "))
    ) {
      result.push(i + 1);
    }
    depth += opens - closes;
  }
  return result;
}

/** nodeIndex -> diagnostic codes for badges on the canvas. */
export function badgesForDiagnostics(
  diagnostics: Diagnostic[],
  source: string,
): Map<number, string[]> {
  const lines = statementLines(source);
  const badges = new Map<number, string[]>();
  for (const diag of diagnostics) {
    const index = lines.indexOf(diag.startLine);
    if (index < 0) continue;
    const codes = badges.get(index) ?? [];
    codes.push(diag.code);
    badges.set(index, codes);
  }
  return badges;
}
