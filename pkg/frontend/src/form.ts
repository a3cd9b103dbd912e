import {
  ALLOY_PRESETS,
  LATTICE_LABELS,
  THICKNESS_MAX,
  THICKNESS_MIN,
  THICKNESS_STEP,
} from "./catalog.js";
import type { PredictRequest } from "./types.js";

/** Everything the design form captures, before validation. */
export interface FormState {
  slot: string;
  lattice_type: string;
  thickness: number;
  preset: string;
  young_modulus: number;
  poisson_ratio: number;
  conductivity: number;
}

export const DEFAULT_FORM: FormState = {
  slot: "default",
  lattice_type: LATTICE_LABELS[0],
  thickness: 0.5,
  preset: "inconel",
  young_modulus: ALLOY_PRESETS.inconel.young_modulus,
  poisson_ratio: ALLOY_PRESETS.inconel.poisson_ratio,
  conductivity: ALLOY_PRESETS.inconel.conductivity,
};

/**
 * Map the form state to the POST /api/predict body. Pure; key order is
 * the documented schema order so the serialized JSON is reproducible.
 */
export function buildPredictRequest(state: FormState): PredictRequest {
  return {
    slot: state.slot,
    lattice_type: state.lattice_type,
    thickness: state.thickness,
    young_modulus: state.young_modulus,
    poisson_ratio: state.poisson_ratio,
    conductivity: state.conductivity,
  };
}

/** First validation problem as a message, or null when submittable. */
export function validateForm(state: FormState): string | null {
  if (!LATTICE_LABELS.includes(state.lattice_type as never)) {
    return "Pick a lattice type from the list.";
  }
  if (!state.slot.trim()) {
    return "Model slot name is required.";
  }
  const t = state.thickness;
  if (!Number.isFinite(t) || t < THICKNESS_MIN || t > THICKNESS_MAX) {
    return `Thickness must be between ${THICKNESS_MIN} and ${THICKNESS_MAX} mm.`;
  }
  const steps = (t - THICKNESS_MIN) / THICKNESS_STEP;
  if (Math.abs(steps - Math.round(steps)) > 1e-6) {
    return `Thickness moves in ${THICKNESS_STEP} mm steps.`;
  }
  if (!Number.isFinite(state.young_modulus) || state.young_modulus <= 0) {
    return "Young's modulus must be a positive number of GPa.";
  }
  if (
    !Number.isFinite(state.poisson_ratio) ||
    state.poisson_ratio <= -1 ||
    state.poisson_ratio >= 0.5
  ) {
    return "Poisson ratio must lie between -1 and 0.5.";
  }
  if (!Number.isFinite(state.conductivity) || state.conductivity < 0) {
    return "Conductivity cannot be negative.";
  }
  return null;
}

export interface DesignFormHandle {
  root: HTMLFormElement;
  state: FormState;
  /** Re-run validation and sync the submit button and inline message. */
  refresh(): void;
}

function field(labelText: string, input: HTMLElement): HTMLLabelElement {
  const label = document.createElement("label");
  label.className = "field";
  const span = document.createElement("span");
  span.textContent = labelText;
  label.append(span, input);
  return label;
}

function numericValue(input: HTMLInputElement): number {
  const raw = input.value.trim();
  return raw === "" ? Number.NaN : Number(raw);
}

function numberInput(
  name: string,
  value: number,
  attrs: Record<string, string> = {},
): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.name = name;
  input.value = String(value);
  for (const [key, val] of Object.entries(attrs)) {
    input.setAttribute(key, val);
  }
  return input;
}

/**
 * Build the design form. onSubmit only fires with a valid state; while
 * any field is invalid the submit button is disabled and the first
 * problem is shown inline.
 */
export function renderDesignForm(
  container: HTMLElement,
  onSubmit: (state: FormState) => void,
  initial: FormState = DEFAULT_FORM,
): DesignFormHandle {
  const state: FormState = { ...initial };

  const form = document.createElement("form");
  form.className = "design-form";

  const lattice = document.createElement("select");
  lattice.name = "lattice_type";
  for (const label of LATTICE_LABELS) {
    const option = document.createElement("option");
    option.value = label;
    option.textContent = label;
    lattice.append(option);
  }
  lattice.value = state.lattice_type;

  const thickness = numberInput("thickness", state.thickness, {
    min: String(THICKNESS_MIN),
    max: String(THICKNESS_MAX),
    step: String(THICKNESS_STEP),
  });

  const preset = document.createElement("select");
  preset.name = "preset";
  for (const [key, alloy] of Object.entries(ALLOY_PRESETS)) {
    const option = document.createElement("option");
    option.value = key;
    option.textContent = alloy.label;
    preset.append(option);
  }
  const custom = document.createElement("option");
  custom.value = "custom";
  custom.textContent = "Custom";
  preset.append(custom);
  preset.value = state.preset;

  const young = numberInput("young_modulus", state.young_modulus, {
    min: "0",
    step: "any",
  });
  const poisson = numberInput("poisson_ratio", state.poisson_ratio, {
    step: "any",
  });
  const conductivity = numberInput("conductivity", state.conductivity, {
    min: "0",
    step: "any",
  });

  const slot = document.createElement("input");
  slot.type = "text";
  slot.name = "slot";
  slot.value = state.slot;

  const message = document.createElement("p");
  message.className = "form-message";

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Predict stiffness";

  const alloyInputs = [young, poisson, conductivity];

  function syncPreset(): void {
    const alloy = ALLOY_PRESETS[state.preset];
    if (alloy) {
      state.young_modulus = alloy.young_modulus;
      state.poisson_ratio = alloy.poisson_ratio;
      state.conductivity = alloy.conductivity;
      young.value = String(alloy.young_modulus);
      poisson.value = String(alloy.poisson_ratio);
      conductivity.value = String(alloy.conductivity);
    }
    for (const input of alloyInputs) {
      input.readOnly = state.preset !== "custom";
    }
  }

  function refresh(): void {
    const problem = validateForm(state);
    submit.disabled = problem !== null;
    message.textContent = problem ?? "";
    message.hidden = problem === null;
  }

  lattice.addEventListener("change", () => {
    state.lattice_type = lattice.value;
    refresh();
  });
  thickness.addEventListener("input", () => {
    state.thickness = numericValue(thickness);
    refresh();
  });
  preset.addEventListener("change", () => {
    state.preset = preset.value;
    syncPreset();
    refresh();
  });
  young.addEventListener("input", () => {
    state.young_modulus = numericValue(young);
    refresh();
  });
  poisson.addEventListener("input", () => {
    state.poisson_ratio = numericValue(poisson);
    refresh();
  });
  conductivity.addEventListener("input", () => {
    state.conductivity = numericValue(conductivity);
    refresh();
  });
  slot.addEventListener("input", () => {
    state.slot = slot.value;
    refresh();
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (validateForm(state) === null) {
      onSubmit({ ...state });
    }
  });

  form.append(
    field("Lattice type", lattice),
    field("Strut thickness (mm)", thickness),
    field("Alloy preset", preset),
    field("Young's modulus (GPa)", young),
    field("Poisson ratio", poisson),
    field("Conductivity (W/m.K)", conductivity),
    field("Model slot", slot),
    message,
    submit,
  );

  syncPreset();
  refresh();
  container.append(form);
  return { root: form, state, refresh };
}
