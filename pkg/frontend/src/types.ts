// Wire types of the inference service, mirrored exactly.

export interface VariableInfo {
  id: string;
  name: string;
  category: string;
  role: 'input' | 'output' | 'latent';
  states: string[];
}

export interface Catalog {
  name: string;
  metadata: Record<string, string>;
  variables: VariableInfo[];
  edges: [string, string][];
}

/** Evidence map sent to POST /infer: variable id -> state label. */
export type EvidenceMap = Record<string, string>;

/** Posteriors keyed by variable id, one probability per state. */
export type PosteriorMap = Record<string, number[]>;

export interface InferResponse {
  posteriors: PosteriorMap;
}

export interface ServiceErrorBody {
  error: { code: string; message: string };
}

export class ServiceError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
  }
}

/** An immutable pinned what-if: the evidence and the posteriors it produced. */
export interface Snapshot {
  label: string;
  evidence: EvidenceMap;
  posteriors: PosteriorMap;
}
