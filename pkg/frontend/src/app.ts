import {
  ApiError,
  fetchDiagnostics,
  fetchHomogenize,
  postPredict,
  postTrain,
} from "./api.js";
import { MODEL_KINDS } from "./catalog.js";
import { renderAllCharts } from "./charts.js";
import { buildPredictRequest, renderDesignForm } from "./form.js";
import type { DesignFormHandle, FormState } from "./form.js";
import type { DiagnosticsBundle, PredictResponse } from "./types.js";

export interface AppHandle {
  root: HTMLElement;
  form: DesignFormHandle;
  loadDiagnostics(slot: string): Promise<void>;
  submitDesign(state: FormState): Promise<void>;
  /** Resolves once every in-flight request has settled. */
  settled(): Promise<void>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text) node.textContent = text;
  return node;
}

function metricCard(name: string, value: number): HTMLElement {
  const card = el("div", "metric-card");
  card.append(
    el("span", "metric-name", name),
    el("span", "metric-value", value.toFixed(4)),
  );
  card.dataset.metric = name.toLowerCase();
  card.dataset.value = String(value);
  return card;
}

/** Mount the explorer; returns handles the tests drive directly. */
export function createApp(root: HTMLElement): AppHandle {
  root.innerHTML = "";

  const banner = el("div", "banner");
  banner.hidden = true;
  const bannerText = el("span", "banner-text");
  const bannerRetry = el("button", "banner-retry", "Retry");
  bannerRetry.type = "button";
  const bannerDismiss = el("button", "banner-dismiss", "Dismiss");
  bannerDismiss.type = "button";
  banner.append(bannerText, bannerRetry, bannerDismiss);

  const header = el("header", "app-header");
  header.append(
    el("h1", "app-title", "Lattice stiffness explorer"),
    el(
      "p",
      "app-subtitle",
      "Predict the effective Young's modulus of an architected lattice " +
        "and inspect the model behind the number.",
    ),
  );

  const formPanel = el("section", "form-panel");
  const resultPanel = el("section", "result-panel");
  const predictionArea = el("div", "prediction-area");
  const inlineError = el("p", "inline-error");
  inlineError.hidden = true;
  const diagnosticsArea = el("div", "diagnostics-area");
  resultPanel.append(predictionArea, inlineError, diagnosticsArea);

  const main = el("main", "app-main");
  main.append(formPanel, resultPanel);
  root.append(banner, header, main);

  // One in-flight request per panel; duplicates return the pending one.
  const pending = new Map<string, Promise<void>>();
  function run(key: string, task: () => Promise<void>): Promise<void> {
    const current = pending.get(key);
    if (current) return current;
    const done = task().finally(() => pending.delete(key));
    pending.set(key, done);
    return done;
  }

  let retryAction: (() => Promise<void>) | null = null;
  function showBanner(message: string, retry: () => Promise<void>): void {
    bannerText.textContent = message;
    retryAction = retry;
    banner.hidden = false;
  }
  function hideBanner(): void {
    banner.hidden = true;
    retryAction = null;
  }
  bannerDismiss.addEventListener("click", hideBanner);
  bannerRetry.addEventListener("click", () => {
    const retry = retryAction;
    hideBanner();
    if (retry) void retry();
  });

  function showInlineError(message: string): void {
    inlineError.textContent = message;
    inlineError.hidden = false;
  }

  function renderEmptyState(slot: string): void {
    diagnosticsArea.innerHTML = "";
    const empty = el("div", "empty-state");
    empty.append(
      el("h2", "empty-title", `No model in slot "${slot}" yet`),
      el(
        "p",
        "empty-hint",
        "Train a model into this slot to unlock predictions and " +
          "diagnostics.",
      ),
    );
    const kindSelect = document.createElement("select");
    kindSelect.className = "train-kind";
    for (const kind of MODEL_KINDS) {
      const option = document.createElement("option");
      option.value = kind;
      option.textContent = kind;
      kindSelect.append(option);
    }
    kindSelect.value = "regularized";
    const trainButton = el("button", "train-cta", "Train this slot");
    trainButton.type = "button";
    trainButton.addEventListener("click", () => {
      void trainSlot(slot, kindSelect.value);
    });
    empty.append(kindSelect, trainButton);
    diagnosticsArea.append(empty);
  }

  function renderDiagnostics(bundle: DiagnosticsBundle): void {
    diagnosticsArea.innerHTML = "";
    const head = el(
      "p",
      "diagnostics-head",
      `Slot "${bundle.slot}" · ${bundle.kind} · v${bundle.model_version} · ` +
        "held-out metrics",
    );
    const cards = el("div", "metric-cards");
    cards.append(
      metricCard("MSE", bundle.metrics.mse),
      metricCard("MAE", bundle.metrics.mae),
      metricCard("R2", bundle.metrics.r2),
    );
    const charts = el("div", "charts");
    diagnosticsArea.append(head, cards, charts);
    renderAllCharts(charts, bundle);
  }

  function renderPrediction(state: FormState, response: PredictResponse): void {
    predictionArea.innerHTML = "";
    const card = el("div", "prediction-card");
    card.dataset.value = String(response.predicted_young_modulus);
    card.append(
      el("span", "prediction-label", "Predicted effective Young's modulus"),
      el(
        "span",
        "prediction-value",
        `${response.predicted_young_modulus.toFixed(4)} GPa`,
      ),
      el(
        "span",
        "prediction-meta",
        `${state.lattice_type}, t = ${state.thickness} mm · slot ` +
          `"${response.model}" v${response.model_version}`,
      ),
    );
    predictionArea.append(card);
  }

  function renderPhysicsCard(prediction: number, solverEx: number): void {
    const card = el("div", "physics-card");
    card.dataset.solver = String(solverEx);
    card.append(
      el("span", "physics-label", "Physics check (direct solver)"),
      el("span", "physics-surrogate", `surrogate ${prediction.toFixed(4)} GPa`),
      el("span", "physics-solver", `solver Ex ${solverEx.toFixed(4)} GPa`),
    );
    predictionArea.append(card);
  }

  async function trainSlot(slot: string, kind: string): Promise<void> {
    return run("train", async () => {
      try {
        await postTrain({ model: kind, seed: 0, slot });
        hideBanner();
      } catch (err) {
        const detail = err instanceof ApiError ? err.message : String(err);
        showBanner(`Training failed: ${detail}`, () => trainSlot(slot, kind));
        return;
      }
      await loadDiagnostics(slot);
    });
  }

  async function loadDiagnostics(slot: string): Promise<void> {
    return run("diagnostics", async () => {
      try {
        const bundle = await fetchDiagnostics(slot);
        renderDiagnostics(bundle);
        hideBanner();
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          renderEmptyState(slot);
          return;
        }
        const detail = err instanceof ApiError ? err.message : String(err);
        showBanner(`Could not load diagnostics: ${detail}`, () =>
          loadDiagnostics(slot),
        );
      }
    });
  }

  async function submitDesign(state: FormState): Promise<void> {
    return run("predict", async () => {
      inlineError.hidden = true;
      const body = buildPredictRequest(state);
      let response: PredictResponse;
      try {
        response = await postPredict(body);
      } catch (err) {
        if (err instanceof ApiError && err.status > 0 && err.status < 500) {
          showInlineError(err.message);
        } else {
          const detail = err instanceof ApiError ? err.message : String(err);
          showBanner(`Prediction failed: ${detail}`, () =>
            submitDesign(state),
          );
        }
        return;
      }
      renderPrediction(state, response);
      try {
        const hom = await fetchHomogenize({
          topology: state.lattice_type,
          thickness: state.thickness,
          E: state.young_modulus,
          nu: state.poisson_ratio,
          k: state.conductivity,
        });
        renderPhysicsCard(response.predicted_young_modulus, hom.engineering.Ex);
      } catch {
        // the physics check is best-effort; the prediction stands alone
      }
    });
  }

  const form = renderDesignForm(formPanel, (state) => {
    void submitDesign(state);
  });
  form.root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.name === "slot" && target.value.trim()) {
      void loadDiagnostics(target.value.trim());
    }
  });

  void loadDiagnostics(form.state.slot);

  async function settled(): Promise<void> {
    while (pending.size > 0) {
      await Promise.allSettled([...pending.values()]);
    }
  }

  return { root, form, loadDiagnostics, submitDesign, settled };
}
