// Thin typed client over the session HTTP API.

import type {
  ApiError,
  ExplanationPayload,
  RelationsPayload,
  RepresentativesPayload,
  SessionPayload,
  StatementRecord,
} from "./types.js";

export class ServiceError extends Error {
  constructor(public info: ApiError) {
    super(info.detail);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ServiceError({
      status: resp.status,
      detail: (body as { detail?: string }).detail ?? resp.statusText,
      rejected: (body as { rejected?: string }).rejected,
    });
  }
  return body as T;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(csv: string): Promise<{ id: string; alternatives: string[]; criteria: string[] }> {
    const resp = await fetch(this.url("/api/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ csv }),
    });
    return asJson(resp);
  }

  async getSession(id: string): Promise<SessionPayload> {
    return asJson(await fetch(this.url(`/api/sessions/${id}`)));
  }

  async addStatement(id: string, line: string): Promise<{ statements: StatementRecord[] }> {
    const resp = await fetch(this.url(`/api/sessions/${id}/preferences`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ line }),
    });
    return asJson(resp);
  }

  async removeStatement(id: string, index: number): Promise<{ statements: StatementRecord[] }> {
    const resp = await fetch(this.url(`/api/sessions/${id}/preferences/${index}`), {
      method: "DELETE",
    });
    return asJson(resp);
  }

  async relations(id: string): Promise<RelationsPayload> {
    return asJson(await fetch(this.url(`/api/sessions/${id}/relations`)));
  }

  async representatives(id: string): Promise<RepresentativesPayload> {
    const resp = await fetch(this.url(`/api/sessions/${id}/representatives`), {
      method: "POST",
    });
    return asJson(resp);
  }

  async explanation(id: string, a: string, b: string): Promise<ExplanationPayload> {
    const query = new URLSearchParams({ a, b });
    return asJson(await fetch(this.url(`/api/sessions/${id}/explanations?${query}`)));
  }
}
