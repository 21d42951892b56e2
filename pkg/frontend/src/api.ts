import type {
  AlternateOfferBlock,
  ComparePayload,
  ScenarioDocument,
  SolveReport,
  TracePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: unknown,
  ) {
    super(typeof body === "object" && body && "detail" in body
      ? String((body as { detail: unknown }).detail)
      : `API error ${status}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const text = await response.text();
    let body: unknown = null;
    if (text) {
      try {
        body = JSON.parse(text);
      } catch {
        body = text;
      }
    }
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }

  listPresets(): Promise<string[]> {
    return this.request("/v1/presets");
  }

  getPreset(name: string): Promise<{ name: string; document: ScenarioDocument }> {
    return this.request(`/v1/presets/${encodeURIComponent(name)}`);
  }

  optimize(document: ScenarioDocument, t: number): Promise<SolveReport> {
    return this.request("/v1/optimize", {
      method: "POST",
      body: JSON.stringify({ document, t }),
    });
  }

  simulate(
    document: ScenarioDocument,
    options: { t_max?: number; steps?: number } = {},
  ): Promise<TracePayload> {
    return this.request("/v1/simulate", {
      method: "POST",
      body: JSON.stringify({ document, ...options }),
    });
  }

  compare(document: ScenarioDocument, alternate: AlternateOfferBlock): Promise<ComparePayload> {
    return this.request("/v1/compare", {
      method: "POST",
      body: JSON.stringify({ document, alternate }),
    });
  }

  saveScenario(document: ScenarioDocument): Promise<{ id: string; revision: number }> {
    return this.request("/v1/scenarios", {
      method: "POST",
      body: JSON.stringify({ document }),
    });
  }

  updateScenario(
    id: string,
    document: ScenarioDocument,
    expectedRevision?: number,
  ): Promise<{ id: string; revision: number }> {
    return this.request(`/v1/scenarios/${encodeURIComponent(id)}`, {
      method: "PUT",
      body: JSON.stringify({ document, expected_revision: expectedRevision ?? null }),
    });
  }
}
