// Starts the real check server over the bundled demo project so the
// integration suite exercises the actual HTTP contract.

import { spawn, ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";

export const SERVER_URL = "http://127.0.0.1:8971";

let server: ChildProcess | null = null;

export async function setup(): Promise<void> {
  const repoRoot = path.resolve(
    path.dirname(fileURLToPath(import.meta.url)),
    "..",
    "..",
  );
  const manifest = path.join(
    repoRoot,
    "tests",
    "fixtures",
    "demo",
    "safepipe.json",
  );
  const code = [
    "import uvicorn",
    "from safepipe.project import Manifest",
    "from safepipe.server import create_app",
    `app = create_app(Manifest.load(${JSON.stringify(manifest)}))`,
    "uvicorn.run(app, host='127.0.0.1', port=8971, log_level='error')",
  ].join("\n");
  server = spawn("python3", ["-c", code], { stdio: "ignore" });
  const deadline = Date.now() + 15000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${SERVER_URL}/stubs`);
      if (response.status === 200) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("check server did not come up on port 8971");
}

export async function teardown(): Promise<void> {
  server?.kill();
}
