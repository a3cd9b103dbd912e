/** Fixed choices offered by the design form. */

export const LATTICE_LABELS = [
  "Simple Cubic",
  "Body Centred Cubic",
  "Face Centred Cubic",
  "Octet",
  "Diamond",
  "Kelvin Cell",
  "Iso Truss",
  "FCC Foam",
  "Hexagonal Honeycomb",
  "Triangular Honeycomb",
  "Re entrant Honeycomb",
] as const;

export interface AlloyPreset {
  label: string;
  young_modulus: number;
  poisson_ratio: number;
  conductivity: number;
}

// E in GPa, k in W/m.K; "custom" leaves the numeric fields editable.
export const ALLOY_PRESETS: Record<string, AlloyPreset> = {
  inconel: {
    label: "Inconel 625",
    young_modulus: 208,
    poisson_ratio: 0.28,
    conductivity: 9.7,
  },
  titanium: {
    label: "Ti-6Al-4V",
    young_modulus: 138.8,
    poisson_ratio: 0.342,
    conductivity: 6.7,
  },
};

export const MODEL_KINDS = [
  "cart",
  "extra_trees",
  "gbm",
  "regularized",
  "ordered",
] as const;

export const THICKNESS_MIN = 0.05;
export const THICKNESS_MAX = 1.0;
export const THICKNESS_STEP = 0.01;
