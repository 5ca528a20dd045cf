/**
 * Thin fetch wrapper over the task service endpoints.
 *
 * Every non-2xx response carries {"error": {"code", "message"}}; that body
 * is surfaced as an ApiError so views can branch on the machine-readable
 * code without string matching.
 */

import type {
  PriorEdges,
  TaskRecord,
  TaskResult,
  TaskSubmission,
  TaskSummary,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

async function parseError(resp: Response): Promise<never> {
  let code = "unknown";
  let message = `http ${resp.status}`;
  try {
    const body = await resp.json();
    if (body && body.error) {
      code = String(body.error.code ?? code);
      message = String(body.error.message ?? message);
    }
  } catch {
    // non-JSON error body; keep the status-line fallback
  }
  throw new ApiError(resp.status, code, message);
}

export class ApiClient {
  baseUrl: string;

  constructor(baseUrl = "") {
    // trailing slashes would double up when joined with /api paths
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, init);
    if (!resp.ok) {
      await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/api/health");
  }

  submitTask(body: TaskSubmission): Promise<{ id: string }> {
    return this.post("/api/tasks", body);
  }

  listTasks(): Promise<{ tasks: TaskSummary[] }> {
    return this.request("/api/tasks");
  }

  getTask(id: string): Promise<TaskRecord> {
    return this.request(`/api/tasks/${encodeURIComponent(id)}`);
  }

  getResult(id: string): Promise<TaskResult> {
    return this.request(`/api/tasks/${encodeURIComponent(id)}/result`);
  }

  annotate(
    id: string,
    delta: PriorEdges,
  ): Promise<{ id: string; parent_id: string }> {
    return this.post(`/api/tasks/${encodeURIComponent(id)}/annotations`, delta);
  }

  deleteTask(id: string): Promise<{ deleted: string }> {
    return this.request(`/api/tasks/${encodeURIComponent(id)}`, {
      method: "DELETE",
    });
  }
}
