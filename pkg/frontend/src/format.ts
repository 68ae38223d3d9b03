import type { PosteriorMap, VariableInfo } from './types';

/** Probabilities are displayed with exactly three decimals. */
export function formatProb(p: number): string {
  return p.toFixed(3);
}

/** Signed delta with three decimals; zero renders as +0.000. */
export function formatDelta(d: number): string {
  const text = Math.abs(d).toFixed(3);
  return `${d < -5e-4 ? '−' : '+'}${text}`;
}

export interface StateView {
  label: string;
  prob: number;
  text: string;      // formatProb(prob)
  widthPct: number;  // bar width, 0..100
  isArgmax: boolean;
}

export interface PosteriorView {
  id: string;
  name: string;
  states: StateView[];
  predicted: string;   // argmax state label (first index on ties)
  confidence: string;  // formatted argmax probability
}

/**
 * View model of one variable's posterior bar group. Display values come
 * straight from the service response; nothing is renormalized.
 */
export function posteriorView(variable: VariableInfo, probs: number[]): PosteriorView {
  let argmax = 0;
  probs.forEach((p, k) => {
    if (p > probs[argmax]) argmax = k;
  });
  const states = probs.map((p, k) => ({
    label: variable.states[k] ?? `state ${k + 1}`,
    prob: p,
    text: formatProb(p),
    widthPct: Math.max(0, Math.min(100, p * 100)),
    isArgmax: k === argmax,
  }));
  return {
    id: variable.id,
    name: variable.name,
    states,
    predicted: states[argmax].label,
    confidence: formatProb(probs[argmax]),
  };
}

/** View models for every variable present in a posterior map. */
export function posteriorViews(
  variables: VariableInfo[],
  posteriors: PosteriorMap,
): PosteriorView[] {
  return variables
    .filter((v) => v.id in posteriors)
    .map((v) => posteriorView(v, posteriors[v.id]));
}
