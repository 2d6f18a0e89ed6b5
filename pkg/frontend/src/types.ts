// Shapes of the monitoring API's JSON bodies. Timestamps are integer
// milliseconds since the epoch; every body carries schema_version.

export interface VolumeResponse {
  schema_version: number;
  now: number;
  recent: number;
  prior: number;
  rate: number | null;
  trend: number[];
  aggregated: number;
  window_s: number;
  rise_threshold: number;
  drop_threshold: number;
}

export interface ReadingSnapshot {
  value: number;
  sampled_at: number;
  received_at: number;
  seq: number;
}

export interface RealtimeResponse {
  schema_version: number;
  node: string;
  readings: Record<string, ReadingSnapshot | null>;
  advisories: string[];
}

export interface BucketJson {
  start: number;
  end: number;
  avg: number | null;
  min: number | null;
  max: number | null;
  gap: boolean;
}

export interface HistoryResponse {
  schema_version: number;
  node: string;
  field: string;
  day_start: number;
  buckets: BucketJson[];
}

export interface CompareResponse {
  schema_version: number;
  node: string;
  field: string;
  period_start: number;
  current: BucketJson[];
  previous: BucketJson[];
}

export interface DayExtremeJson {
  day_start: number;
  high: number | null;
  low: number | null;
  gap: boolean;
}

export interface WeekResponse {
  schema_version: number;
  node: string;
  field: string;
  week_start: number;
  days: DayExtremeJson[];
}

export interface AlertJson {
  kind: string;
  node_id: string | null;
  detected_at: number;
  window_start: number | null;
  window_end: number | null;
  evidence: string;
  value: number | null;
}

export interface AlertsResponse {
  schema_version: number;
  alerts: AlertJson[];
}

export interface PositionResponse {
  schema_version: number;
  node: string;
  fix: { lat: number; lon: number; at: number } | null;
  now: number;
  tamper_active: boolean;
}

export interface MetaResponse {
  schema_version: number;
  nodes: string[];
  poll_ms: number;
  admin_enabled: boolean;
  now: number;
}

export interface ErrorBody {
  schema_version: number;
  error: string;
}
