/**
 * Pointer telemetry: client-side 30 Hz downsampling, a bounded hand-off
 * queue that never blocks input handling (drop-oldest on overflow, drops
 * counted), and a background uploader with local buffering across network
 * loss.
 */

export interface RawSample {
  x: number;
  y: number;
  t: number; // ms since question start
}

export const NOMINAL_HZ = 30;

const clamp01 = (v: number) => (v < 0 ? 0 : v > 1 ? 1 : v);

/** Keep at most one sample per 1/hz window (the latest in each window). */
export class CadenceFilter {
  private lastBucket: number | null = null;
  private pending: RawSample | null = null;

  constructor(private hz: number = NOMINAL_HZ) {}

  /** Returns the finalized sample of a previous window, if one closed. */
  push(x: number, y: number, t: number): RawSample | null {
    const bucket = Math.floor((t * this.hz) / 1000);
    const sample = { x: clamp01(x), y: clamp01(y), t: Math.floor(t) };
    if (this.lastBucket === null || bucket === this.lastBucket) {
      this.lastBucket = bucket;
      const emit = null;
      this.pending = sample;
      return emit;
    }
    const finished = this.pending;
    this.lastBucket = bucket;
    this.pending = sample;
    return finished;
  }

  /** The still-open window's sample, at question end. */
  flush(): RawSample | null {
    const rest = this.pending;
    this.pending = null;
    this.lastBucket = null;
    return rest;
  }
}

/** Bounded drop-oldest queue between the input thread and the uploader. */
export class BoundedQueue<T> {
  private items: T[] = [];
  dropped = 0;

  constructor(readonly capacity: number = 4096) {
    if (capacity <= 0) throw new RangeError("capacity must be positive");
  }

  push(item: T): void {
    if (this.items.length >= this.capacity) {
      this.items.shift();
      this.dropped += 1;
    }
    this.items.push(item);
  }

  drain(): T[] {
    const out = this.items;
    this.items = [];
    return out;
  }

  get length(): number {
    return this.items.length;
  }
}

export const sampleLine = (s: RawSample): string =>
  `${s.t},${s.x.toFixed(6)},${s.y.toFixed(6)}`;

export interface TraceIdentity {
  participant_id: string;
  condition: string;
  variant_tag: string;
  question_id: string;
}

type PostFn = (lines: string[]) => Promise<void>;

/**
 * Drains the queue on a timer and posts line batches; on failure the batch
 * goes back into a retry buffer and is flushed on the next success path,
 * so input handling never waits on the network.
 */
export class TraceUploader {
  private retry: string[] = [];

  constructor(private queue: BoundedQueue<string>, private post: PostFn) {}

  async flush(): Promise<boolean> {
    const batch = [...this.retry, ...this.queue.drain()];
    if (batch.length === 0) return true;
    try {
      await this.post(batch);
      this.retry = [];
      return true;
    } catch {
      this.retry = batch;
      return false;
    }
  }

  get backlog(): number {
    return this.retry.length + this.queue.length;
  }
}
