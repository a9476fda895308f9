/** Typed client for the firecontain session service.
 *
 * Every helper returns the parsed JSON body; non-2xx responses throw
 * `ApiError` carrying the service's structured error body (code, detail,
 * offending vertex ids) so callers can branch on `code` instead of
 * scraping message text.
 */

export type VertexStatus = "burning" | "protected" | "open";

export interface VertexView {
  id: string;
  distance: number;
  status: VertexStatus;
  layout: [number, number] | null;
}

export interface BoardView {
  session: string;
  time: number;
  /** budget of the NEXT turn, floor(C * (time+1)^d) */
  budget: number;
  contained: boolean;
  contained_at: number | null;
  fire_size: number;
  total_protected: number;
  pending: string[];
  radius: number;
  vertices: VertexView[];
  edges: [number, number][];
}

export interface SessionCreated {
  id: string;
  view: BoardView;
}

export interface HintResponse {
  hint: string[];
  advisory: boolean;
}

export interface ErrorBody {
  code: string;
  detail: string;
  offending: string[];
}

export interface GraphSpec {
  kind: "group" | "family";
  group?: string;
  family?: string;
  params?: Record<string, unknown>;
  generators?: string[];
}

export interface CreateRequest {
  graph: GraphSpec;
  fire: string[] | { ball: number };
  schedule: { C: number | string; d: number };
  view_radius?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(`${body.code}: ${body.detail}`);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    // bind lazily so the global fetch keeps its expected receiver
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ErrorBody;
      try {
        const parsed = (await response.json()) as Partial<ErrorBody>;
        body = {
          code: typeof parsed.code === "string" ? parsed.code : "http-error",
          detail: typeof parsed.detail === "string" ? parsed.detail : `HTTP ${response.status}`,
          offending: Array.isArray(parsed.offending) ? parsed.offending : [],
        };
      } catch {
        body = { code: "http-error", detail: `HTTP ${response.status}`, offending: [] };
      }
      throw new ApiError(response.status, body);
    }
    return response;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.json<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  createSession(req: CreateRequest): Promise<SessionCreated> {
    return this.post<SessionCreated>("/sessions", req);
  }

  view(sessionId: string, radius?: number): Promise<BoardView> {
    const query = radius === undefined ? "" : `?radius=${radius}`;
    return this.json<BoardView>(`/sessions/${sessionId}/view${query}`);
  }

  protect(sessionId: string, protect: string[], unprotect: string[] = []): Promise<BoardView> {
    return this.post<BoardView>(`/sessions/${sessionId}/protect`, { protect, unprotect });
  }

  step(sessionId: string): Promise<BoardView> {
    return this.post<BoardView>(`/sessions/${sessionId}/step`);
  }

  hint(sessionId: string): Promise<HintResponse> {
    return this.json<HintResponse>(`/sessions/${sessionId}/hint`);
  }

  /** The game so far as a trace file (JSON Lines), byte-exact. */
  async trace(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/trace`);
    return await response.text();
  }
}
