// Thin client for the check server.  At most one request is in flight;
// later calls queue behind it (single-threaded sync model).

import { Diagnostic, GraphDoc, PaletteEntry } from "./types.js";

export interface ApiResponse<T> {
  ok: boolean;
  status: number;
  body: T & { version: number; diagnostics: Diagnostic[] };
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiClient {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private request<T>(
    method: string,
    path: string,
    payload?: unknown,
  ): Promise<ApiResponse<T>> {
    const run = async (): Promise<ApiResponse<T>> => {
      const response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: { "Content-Type": "application/json" },
        body: payload === undefined ? undefined : JSON.stringify(payload),
      });
      const body = (await response.json()) as ApiResponse<T>["body"];
      return {
        ok: response.status >= 200 && response.status < 300,
        status: response.status,
        body,
      };
    };
    const queued = this.queue.then(run, run);
    this.queue = queued.catch(() => undefined);
    return queued;
  }

  check(source: string): Promise<ApiResponse<object>> {
    return this.request("POST", "/check", { source });
  }

  graphFromText(
    source: string,
  ): Promise<ApiResponse<{ graph: GraphDoc }>> {
    return this.request("POST", "/graph/from-text", { source });
  }

  graphToText(graph: GraphDoc): Promise<ApiResponse<{ source: string }>> {
    return this.request("POST", "/graph/to-text", { graph });
  }

  stubs(): Promise<ApiResponse<{ stubs: PaletteEntry[] }>> {
    return this.request("GET", "/stubs");
  }

  reload(): Promise<ApiResponse<object>> {
    return this.request("POST", "/reload");
  }
}
