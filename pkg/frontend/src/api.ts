import type {
  DiagnosticsBundle,
  HomogenizeResponse,
  PredictRequest,
  PredictResponse,
  TrainRequest,
  TrainResponse,
} from "./types.js";

/** HTTP failure with the server's detail message; status 0 = network. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (err) {
    throw new ApiError(0, `Cannot reach the service: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = `${response.status} ${response.statusText}`;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export function fetchDiagnostics(slot: string): Promise<DiagnosticsBundle> {
  return request(`/api/diagnostics/${encodeURIComponent(slot)}`);
}

export function postPredict(body: PredictRequest): Promise<PredictResponse> {
  return request("/api/predict", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function postTrain(body: TrainRequest): Promise<TrainResponse> {
  return request("/api/train", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function fetchHomogenize(params: {
  topology: string;
  thickness: number;
  E: number;
  nu: number;
  k: number;
}): Promise<HomogenizeResponse> {
  const query = new URLSearchParams({
    topology: params.topology,
    thickness: String(params.thickness),
    E: String(params.E),
    nu: String(params.nu),
    k: String(params.k),
  });
  return request(`/api/homogenize?${query.toString()}`);
}
