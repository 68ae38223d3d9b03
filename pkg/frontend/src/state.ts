import type { Catalog, EvidenceMap, PosteriorMap, Snapshot, VariableInfo } from './types';

export const MAX_SNAPSHOTS = 8;

/**
 * Session state for one investigator session: the loaded catalog, the
 * current evidence map, and pinned what-if snapshots.
 *
 * Pure data + pure transitions; every mutation validates against the
 * catalog so an /infer request can never mention an unknown variable or
 * state. Snapshots are deep-frozen when pinned and never change afterwards.
 */
export class SessionState {
  readonly evidence: EvidenceMap = {};
  readonly snapshots: Snapshot[] = [];

  constructor(readonly catalog: Catalog) {}

  variable(id: string): VariableInfo {
    const v = this.catalog.variables.find((x) => x.id === id);
    if (!v) throw new Error(`unknown variable '${id}'`);
    return v;
  }

  get inputVariables(): VariableInfo[] {
    return this.catalog.variables.filter((v) => v.role === 'input');
  }

  get outputVariables(): VariableInfo[] {
    return this.catalog.variables.filter((v) => v.role === 'output');
  }

  setEvidence(id: string, state: string): void {
    const v = this.variable(id);
    if (!v.states.includes(state)) {
      throw new Error(`variable '${id}' has no state '${state}'`);
    }
    (this.evidence as Record<string, string>)[id] = state;
  }

  clearEvidence(id: string): void {
    this.variable(id);
    delete (this.evidence as Record<string, string>)[id];
  }

  resetEvidence(): void {
    for (const key of Object.keys(this.evidence)) {
      delete (this.evidence as Record<string, string>)[key];
    }
  }

  /**
   * Pin the current evidence with the posteriors the service returned for
   * it. The snapshot copies both maps and freezes them: later evidence
   * edits must never show through a pin.
   */
  pinSnapshot(posteriors: PosteriorMap, label?: string): Snapshot {
    const snapshot: Snapshot = Object.freeze({
      label: label ?? `pin ${this.snapshots.length + 1}`,
      evidence: Object.freeze({ ...this.evidence }) as EvidenceMap,
      posteriors: Object.freeze(
        Object.fromEntries(
          Object.entries(posteriors).map(([id, probs]) => [
            id,
            Object.freeze([...probs]) as unknown as number[],
          ]),
        ),
      ) as PosteriorMap,
    });
    this.snapshots.push(snapshot);
    if (this.snapshots.length > MAX_SNAPSHOTS) this.snapshots.shift();
    return snapshot;
  }

  removeSnapshot(index: number): void {
    this.snapshots.splice(index, 1);
  }
}

/**
 * Per-state posterior differences between two snapshots, variable by
 * variable. This is the only client-side arithmetic on probabilities.
 */
export function compareSnapshots(
  a: Snapshot,
  b: Snapshot,
): Record<string, number[]> {
  const ids = Object.keys(a.posteriors).filter((id) => id in b.posteriors);
  const deltas: Record<string, number[]> = {};
  for (const id of ids) {
    const pa = a.posteriors[id];
    const pb = b.posteriors[id];
    if (pa.length !== pb.length) continue;
    deltas[id] = pb.map((p, k) => p - pa[k]);
  }
  return deltas;
}
