/** Thin fetch client for the emobaseline HTTP service.
 *
 * Every mutation goes through here; the UI holds no state the server
 * cannot reconstruct.
 */

import type {
  ConvergenceReport,
  ImportanceRow,
  RankingSubmission,
  RankingsResponse,
  SessionPlan,
  SubjectSummary,
  TrainResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchFn: FetchLike = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, "NetworkError", String(err));
    }
    const text = await response.text();
    let doc: any = {};
    if (text) {
      try {
        doc = JSON.parse(text);
      } catch {
        doc = { message: text };
      }
    }
    if (!response.ok) {
      throw new ApiError(
        response.status,
        doc.code ?? `HTTP${response.status}`,
        doc.message ?? JSON.stringify(doc),
      );
    }
    return doc as T;
  }

  createSubject(
    questionnaire: { emotion: number; tag: string; affinity: number }[],
  ): Promise<{ subject_id: string }> {
    return this.request("POST", "/subjects", { questionnaire });
  }

  getSubject(subjectId: string): Promise<SubjectSummary> {
    return this.request("GET", `/subjects/${subjectId}`);
  }

  nextSession(subjectId: string): Promise<SessionPlan> {
    return this.request("GET", `/subjects/${subjectId}/sessions/next`);
  }

  submitRankings(
    subjectId: string,
    sessionId: string,
    rankings: RankingSubmission[],
  ): Promise<RankingsResponse> {
    return this.request(
      "POST",
      `/subjects/${subjectId}/sessions/${sessionId}/rankings`,
      { rankings },
    );
  }

  convergence(subjectId: string): Promise<ConvergenceReport> {
    return this.request("GET", `/subjects/${subjectId}/convergence`);
  }

  buildDataset(
    subjectId: string,
    params: { w?: number; min_rank?: number | null; with_skt?: boolean; trim_s?: number },
  ): Promise<{ dataset_id: string; n_instances: number }> {
    return this.request("POST", `/subjects/${subjectId}/datasets`, params);
  }

  train(
    subjectId: string,
    params: {
      classifier?: string;
      seed?: number;
      dataset_id?: string;
      binary?: boolean;
      cv_folds?: number | null;
      params?: Record<string, unknown>;
    },
  ): Promise<TrainResponse> {
    return this.request("POST", `/subjects/${subjectId}/train`, params);
  }

  importance(modelId: string): Promise<{ model_id: string; importance: ImportanceRow[] }> {
    return this.request("GET", `/models/${modelId}/importance`);
  }
}
