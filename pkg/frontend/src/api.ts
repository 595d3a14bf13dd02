/** Thin client for the study service endpoints. */

import type { AnnotationDoc, LayoutDoc } from "./engine.js";
import type { OutcomeRecord } from "./quiz.js";
import type { TraceIdentity } from "./telemetry.js";

export interface BundleDoc {
  charts: Record<string, { annotation: AnnotationDoc; bitmap: string }>;
  questions: Record<string, unknown[]>;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        detail = ((await response.json()) as { error?: string }).error ?? detail;
      } catch {
        // keep the status text
      }
      throw new Error(`${path}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  bundle(): Promise<BundleDoc> {
    return this.json("/bundle");
  }

  chartUrl(chartId: string): string {
    return `${this.baseUrl}/charts/${chartId}`;
  }

  assignment(participant: number): Promise<{
    order_index: number;
    sequence: { condition: string; variant: string }[];
  }> {
    return this.json(`/assign?participant=${participant}`);
  }

  /** Server-side layout (the offline path uses the embedded engine instead;
   * both produce identical documents). */
  layout(body: Record<string, unknown>): Promise<LayoutDoc> {
    return this.json("/layout", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  saveSession(doc: {
    participant_id: string;
    condition: string;
    variant_tag: string;
    time_limit_s: number;
    shuffle_seed: number;
    settings: Record<string, unknown>;
    records: OutcomeRecord[];
  }): Promise<{ saved: string }> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
  }

  uploadTraceLines(identity: TraceIdentity, lines: string[]): Promise<{ received: number }> {
    return this.json("/traces", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ ...identity, lines }),
    });
  }
}
