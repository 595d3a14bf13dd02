/**
 * Quiz session state machine: shows questions with a visible countdown,
 * records correct/incorrect/skip outcomes, and advances on timeout. The
 * clock is injected so sessions are testable with a fake clock.
 */

export interface QuestionDoc {
  question_id: string;
  chart_id: string;
  prompt: string;
  options: string[];
  correct_index: number;
  variant_tag: string;
  chart_type: string;
}

export type OutcomeKind = "correct" | "incorrect" | "timeout" | "skip";

export interface OutcomeRecord {
  question_id: string;
  chart_id: string;
  chart_type: string;
  n_options: number;
  kind: OutcomeKind;
  answer_index: number | null;
  elapsed: number;
}

export type Clock = () => number;

export const TIME_LIMIT_S = 38;

/** Seeded shuffle (mulberry32 + Fisher-Yates) so question order is replayable. */
export function shuffleQuestions<T>(items: T[], seed: number): T[] {
  let s = seed >>> 0;
  const rand = () => {
    s = (s + 0x6d2b79f5) >>> 0;
    let t = s;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j]!, out[i]!];
  }
  return out;
}

export class QuizController {
  readonly order: QuestionDoc[];
  readonly records: OutcomeRecord[] = [];
  readonly timeLimitS: number;
  private clock: Clock;
  private shownAt: number | null = null;
  private index = 0;

  constructor(
    questions: QuestionDoc[],
    seed: number,
    clock: Clock,
    timeLimitS: number = TIME_LIMIT_S,
  ) {
    if (questions.length === 0) throw new Error("no questions");
    this.order = shuffleQuestions(questions, seed);
    this.clock = clock;
    this.timeLimitS = timeLimitS;
  }

  get finished(): boolean {
    return this.index >= this.order.length;
  }

  get current(): QuestionDoc {
    const q = this.order[this.index];
    if (!q) throw new Error("session finished");
    return q;
  }

  showQuestion(): QuestionDoc {
    const q = this.current;
    this.shownAt = this.clock();
    return q;
  }

  /** Seconds left on the visible countdown. */
  remaining(): number {
    if (this.shownAt === null) throw new Error("question not shown");
    return Math.max(0, this.timeLimitS - (this.clock() - this.shownAt));
  }

  /** True when the limit has been hit and a timeout was recorded. */
  tick(): boolean {
    if (this.shownAt === null || this.finished) return false;
    if (this.clock() - this.shownAt >= this.timeLimitS) {
      this.record("timeout", null, this.timeLimitS);
      return true;
    }
    return false;
  }

  answer(answerIndex: number): OutcomeRecord {
    const elapsed = this.elapsed();
    if (elapsed >= this.timeLimitS) {
      return this.record("timeout", null, this.timeLimitS);
    }
    const kind: OutcomeKind =
      answerIndex === this.current.correct_index ? "correct" : "incorrect";
    return this.record(kind, answerIndex, elapsed);
  }

  skip(): OutcomeRecord {
    const elapsed = this.elapsed();
    if (elapsed >= this.timeLimitS) {
      return this.record("timeout", null, this.timeLimitS);
    }
    return this.record("skip", null, elapsed);
  }

  private elapsed(): number {
    if (this.shownAt === null) throw new Error("question not shown");
    return this.clock() - this.shownAt;
  }

  private record(kind: OutcomeKind, answerIndex: number | null, elapsed: number): OutcomeRecord {
    const q = this.current;
    const rec: OutcomeRecord = {
      question_id: q.question_id,
      chart_id: q.chart_id,
      chart_type: q.chart_type,
      n_options: q.options.length,
      kind,
      answer_index: answerIndex,
      elapsed,
    };
    this.records.push(rec);
    this.index += 1;
    this.shownAt = null;
    return rec;
  }
}

export const BREAK_SECONDS = 120;

/**
 * Between-condition break screen. The countdown is advisory: the study
 * enforces breaks procedurally, so the continue control stays enabled.
 */
export class BreakTimer {
  private startedAt: number;
  constructor(private clock: Clock, readonly seconds: number = BREAK_SECONDS) {
    this.startedAt = clock();
  }

  remaining(): number {
    return Math.max(0, this.seconds - (this.clock() - this.startedAt));
  }

  get suggestedDone(): boolean {
    return this.remaining() === 0;
  }
}
