import { ApiClient } from './api';
import { posteriorViews, formatDelta, formatProb } from './format';
import { SessionState, compareSnapshots } from './state';
import type { PosteriorMap } from './types';
import { ServiceError } from './types';

// ── Configuration ───────────────────────────────────────────
const params = new URLSearchParams(window.location.search);
const BASE_URL = params.get('service') ?? 'http://127.0.0.1:8421';

const api = new ApiClient(BASE_URL);

// ── Mutable session ─────────────────────────────────────────
let state: SessionState | null = null;
let lastPosteriors: PosteriorMap | null = null;
let compareA: number | null = null;
let compareB: number | null = null;

// Latest-wins request tracking: stale responses are dropped and superseded
// requests aborted, so the bars never show a posterior for old evidence.
let requestSerial = 0;
let inflight: AbortController | null = null;

const app = document.querySelector<HTMLDivElement>('#app')!;

// ── Bootstrap ───────────────────────────────────────────────
async function start(): Promise<void> {
  app.innerHTML = `<p class="muted">loading catalog from ${BASE_URL} ...</p>`;
  try {
    const catalog = await api.getNetwork();
    state = new SessionState(catalog);
    buildLayout(catalog.name);
    renderEvidencePanel();
    await refresh();
  } catch (err) {
    app.innerHTML = '';
    showBanner(describe(err), true);
  }
}

function buildLayout(modelName: string): void {
  app.innerHTML = `
    <header>
      <h1>profilernet</h1>
      <span class="model">model: ${esc(modelName)}</span>
    </header>
    <div id="banner" class="banner hidden"></div>
    <main>
      <section class="panel">
        <h2>Crime-scene evidence</h2>
        <div id="evidence"></div>
        <button id="reset" type="button">clear all evidence</button>
      </section>
      <section class="panel">
        <h2>Profile posteriors</h2>
        <div id="posteriors"><p class="muted">waiting for first inference...</p></div>
        <button id="pin" type="button" disabled>pin snapshot</button>
      </section>
      <section class="panel">
        <h2>What-if snapshots</h2>
        <div id="snapshots"><p class="muted">nothing pinned yet</p></div>
        <div id="compare"></div>
      </section>
    </main>`;
  byId('reset').addEventListener('click', () => {
    state?.resetEvidence();
    renderEvidencePanel();
    void refresh();
  });
  byId('pin').addEventListener('click', onPin);
}

// ── Evidence panel ──────────────────────────────────────────
function renderEvidencePanel(): void {
  if (!state) return;
  const host = byId('evidence');
  host.innerHTML = '';
  for (const variable of state.inputVariables) {
    const row = document.createElement('div');
    row.className = 'evidence-row';
    const label = document.createElement('label');
    label.textContent = variable.name;
    label.htmlFor = `ev-${variable.id}`;
    const select = document.createElement('select');
    select.id = `ev-${variable.id}`;
    const unset = document.createElement('option');
    unset.value = '';
    unset.textContent = '(unset)';
    select.appendChild(unset);
    for (const s of variable.states) {
      const option = document.createElement('option');
      option.value = s;
      option.textContent = s;
      select.appendChild(option);
    }
    select.value = state.evidence[variable.id] ?? '';
    select.addEventListener('change', () => {
      if (!state) return;
      if (select.value === '') state.clearEvidence(variable.id);
      else state.setEvidence(variable.id, select.value);
      void refresh();
    });
    row.append(label, select);
    host.appendChild(row);
  }
}

// ── Inference round trip ────────────────────────────────────
async function refresh(): Promise<void> {
  if (!state) return;
  const serial = ++requestSerial;
  inflight?.abort();
  inflight = new AbortController();
  try {
    const response = await api.infer({ ...state.evidence }, inflight.signal);
    if (serial !== requestSerial) return; // superseded while in flight
    lastPosteriors = response.posteriors;
    hideBanner();
    renderPosteriors();
  } catch (err) {
    if (serial !== requestSerial) return;
    if (err instanceof DOMException && err.name === 'AbortError') return;
    lastPosteriors = null;
    renderPosteriors();
    showBanner(describe(err), !(err instanceof ServiceError));
  }
}

function renderPosteriors(): void {
  if (!state) return;
  const host = byId('posteriors');
  const pin = byId('pin') as HTMLButtonElement;
  if (!lastPosteriors) {
    host.innerHTML = '<p class="muted">no posteriors available</p>';
    pin.disabled = true;
    return;
  }
  pin.disabled = false;
  host.innerHTML = '';
  for (const view of posteriorViews(state.outputVariables, lastPosteriors)) {
    const block = document.createElement('div');
    block.className = 'variable';
    block.innerHTML = `<div class="var-name">${esc(view.name)}
      <span class="predicted">→ ${esc(view.predicted)} (${view.confidence})</span></div>`;
    for (const s of view.states) {
      block.appendChild(bar(s.label, s.widthPct, s.text, s.isArgmax));
    }
    host.appendChild(block);
  }
}

function bar(label: string, widthPct: number, text: string, argmax: boolean): HTMLElement {
  const row = document.createElement('div');
  row.className = 'bar-row' + (argmax ? ' argmax' : '');
  row.innerHTML = `
    <span class="state">${esc(label)}</span>
    <span class="track"><span class="fill" style="width:${widthPct}%"></span></span>
    <span class="value">${text}</span>`;
  return row;
}

// ── Snapshots ───────────────────────────────────────────────
function onPin(): void {
  if (!state || !lastPosteriors) return;
  state.pinSnapshot(lastPosteriors);
  renderSnapshots();
}

function renderSnapshots(): void {
  if (!state) return;
  const host = byId('snapshots');
  if (state.snapshots.length === 0) {
    host.innerHTML = '<p class="muted">nothing pinned yet</p>';
    byId('compare').innerHTML = '';
    return;
  }
  host.innerHTML = '';
  state.snapshots.forEach((snapshot, index) => {
    const card = document.createElement('div');
    card.className = 'snapshot';
    const evidence = Object.entries(snapshot.evidence)
      .map(([k, v]) => `${k}=${v}`)
      .join(', ') || '(no evidence)';
    card.innerHTML = `<div class="snap-head">
        <strong>${esc(snapshot.label)}</strong>
        <span class="muted">${esc(evidence)}</span>
      </div>`;
    const pickA = document.createElement('button');
    pickA.textContent = compareA === index ? 'A ✓' : 'A';
    pickA.addEventListener('click', () => {
      compareA = index;
      renderSnapshots();
    });
    const pickB = document.createElement('button');
    pickB.textContent = compareB === index ? 'B ✓' : 'B';
    pickB.addEventListener('click', () => {
      compareB = index;
      renderSnapshots();
    });
    const drop = document.createElement('button');
    drop.textContent = 'remove';
    drop.addEventListener('click', () => {
      state?.removeSnapshot(index);
      if (compareA === index) compareA = null;
      if (compareB === index) compareB = null;
      renderSnapshots();
    });
    card.append(pickA, pickB, drop);
    host.appendChild(card);
  });
  renderCompare();
}

function renderCompare(): void {
  if (!state) return;
  const host = byId('compare');
  if (compareA === null || compareB === null) {
    host.innerHTML = '<p class="muted">pick snapshots A and B to compare</p>';
    return;
  }
  const a = state.snapshots[compareA];
  const b = state.snapshots[compareB];
  if (!a || !b) {
    host.innerHTML = '';
    return;
  }
  const deltas = compareSnapshots(a, b);
  host.innerHTML = '<h3>B − A</h3>';
  for (const variable of state.outputVariables) {
    if (!(variable.id in deltas)) continue;
    const block = document.createElement('div');
    block.className = 'variable';
    block.innerHTML = `<div class="var-name">${esc(variable.name)}</div>`;
    sideBySide(block, variable.states, a.posteriors[variable.id],
               b.posteriors[variable.id], deltas[variable.id]);
    host.appendChild(block);
  }
}

function sideBySide(host: HTMLElement, labels: string[], pa: number[],
                    pb: number[], delta: number[]): void {
  labels.forEach((label, k) => {
    const row = document.createElement('div');
    row.className = 'compare-row';
    row.innerHTML = `
      <span class="state">${esc(label)}</span>
      <span class="value">${formatProb(pa[k])}</span>
      <span class="track small"><span class="fill" style="width:${pa[k] * 100}%"></span></span>
      <span class="track small"><span class="fill b" style="width:${pb[k] * 100}%"></span></span>
      <span class="value">${formatProb(pb[k])}</span>
      <span class="delta">${formatDelta(delta[k])}</span>`;
    host.appendChild(row);
  });
}

// ── Banner / helpers ────────────────────────────────────────
function showBanner(message: string, offline: boolean): void {
  const banner = byId('banner');
  banner.textContent = message;
  banner.classList.remove('hidden');
  banner.classList.toggle('offline', offline);
  setControlsDisabled(offline);
}

function hideBanner(): void {
  byId('banner').classList.add('hidden');
  setControlsDisabled(false);
}

function setControlsDisabled(disabled: boolean): void {
  document.querySelectorAll<HTMLSelectElement>('#evidence select').forEach((el) => {
    el.disabled = disabled;
  });
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) return `${err.code}: ${err.message}`;
  return `service unreachable at ${BASE_URL} (${String(err)})`;
}

function byId(id: string): HTMLElement {
  return document.getElementById(id)!;
}

function esc(text: string): string {
  const div = document.createElement('div');
  div.textContent = text;
  return div.innerHTML;
}

void start();
