// Thin fetch layer. Views never compute detection logic; they render what
// these calls return. The fetcher is injectable so tests can replay
// recorded fixtures without a server.

import type {
  AlertsResponse,
  CompareResponse,
  HistoryResponse,
  MetaResponse,
  PositionResponse,
  RealtimeResponse,
  VolumeResponse,
  WeekResponse,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export type Fetcher = (path: string) => Promise<unknown>;

export const httpFetcher: Fetcher = async (path) => {
  const res = await fetch(path);
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    // non-JSON error body; fall through with the status alone
  }
  if (!res.ok) {
    const message =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `HTTP ${res.status}`;
    throw new ApiError(res.status, message);
  }
  return body;
};

const query = (params: Record<string, string>) =>
  new URLSearchParams(params).toString();

export class Client {
  constructor(private fetcher: Fetcher = httpFetcher) {}

  meta() {
    return this.fetcher("/api/meta") as Promise<MetaResponse>;
  }
  volume() {
    return this.fetcher("/api/volume") as Promise<VolumeResponse>;
  }
  realtime(node: string) {
    return this.fetcher(`/api/realtime?${query({ node })}`) as Promise<RealtimeResponse>;
  }
  history(node: string, field: string, day: string) {
    return this.fetcher(
      `/api/history?${query({ node, field, day })}`,
    ) as Promise<HistoryResponse>;
  }
  compare(node: string, field: string, day: string, hour: number) {
    return this.fetcher(
      `/api/compare?${query({ node, field, day, hour: String(hour) })}`,
    ) as Promise<CompareResponse>;
  }
  week(node: string, field: string, start: string) {
    return this.fetcher(
      `/api/week?${query({ node, field, start })}`,
    ) as Promise<WeekResponse>;
  }
  alerts(since?: number) {
    const suffix = since === undefined ? "" : `?${query({ since: String(since) })}`;
    return this.fetcher(`/api/alerts${suffix}`) as Promise<AlertsResponse>;
  }
  position(node: string) {
    return this.fetcher(`/api/position?${query({ node })}`) as Promise<PositionResponse>;
  }
  setWhitelist(address: string, action: "add" | "remove") {
    return fetch("/api/admin/whitelist", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ address, action }),
    }).then((r) => r.json());
  }
}
