import type { Catalog, EvidenceMap, InferResponse, ServiceErrorBody } from './types';
import { ServiceError } from './types';

type FetchLike = typeof fetch;

/**
 * Thin client for the inference service. All probability math happens on
 * the server; this only moves JSON. A custom fetch can be injected for
 * tests.
 */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  async getNetwork(): Promise<Catalog> {
    const res = await this.fetchImpl(`${this.baseUrl}/network`);
    return (await this.unwrap(res)) as Catalog;
  }

  async infer(evidence: EvidenceMap, signal?: AbortSignal): Promise<InferResponse> {
    const res = await this.fetchImpl(`${this.baseUrl}/infer`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ evidence }),
      signal,
    });
    return (await this.unwrap(res)) as InferResponse;
  }

  private async unwrap(res: Response): Promise<unknown> {
    if (res.ok) return res.json();
    let body: ServiceErrorBody | null = null;
    try {
      body = (await res.json()) as ServiceErrorBody;
    } catch {
      /* non-JSON error body */
    }
    if (body?.error) throw new ServiceError(body.error.code, body.error.message);
    throw new ServiceError('http_error', `service returned ${res.status}`);
  }
}
