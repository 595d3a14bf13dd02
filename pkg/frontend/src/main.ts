/**
 * Page wiring: chart viewer with live overlay, WYSIWYG settings panel, and
 * the quiz flow. One interactive path paints frames; trace upload runs in
 * the background off a bounded queue so input is never blocked.
 *
 * Keyboard: "c" toggles the overlay (alternative to left click).
 */

import { ApiClient } from "./api.js";
import type { AnnotationDoc, MinimapSettings, OverlaySettings } from "./engine.js";
import { defaultMinimapSettings, defaultOverlaySettings, rect } from "./engine.js";
import { frameLayout, displayList, paint, type FrameState, type Method } from "./render.js";
import { QuizController, BreakTimer } from "./quiz.js";
import {
  BoundedQueue,
  CadenceFilter,
  TraceUploader,
  sampleLine,
  type TraceIdentity,
} from "./telemetry.js";
import { applySetting, overlayChecks, minimapChecks, toggleEnabled, SettingError } from "./settings.js";

interface AppElements {
  canvas: HTMLCanvasElement;
  chartSelect: HTMLSelectElement;
  methodSelect: HTMLSelectElement;
  panel: HTMLElement;
  panelError: HTMLElement;
  quizRoot: HTMLElement;
  status: HTMLElement;
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

class App {
  private api: ApiClient;
  private elements: AppElements;
  private image = new Image();
  private annotation: AnnotationDoc | null = null;
  private state: FrameState | null = null;
  private lastPointer: [number, number] | null = null;
  private queue = new BoundedQueue<string>(4096);
  private cadence = new CadenceFilter();
  private uploader: TraceUploader | null = null;
  private identity: TraceIdentity | null = null;
  private questionShownAt = 0;

  constructor(serverUrl: string, elements: AppElements) {
    this.api = new ApiClient(serverUrl);
    this.elements = elements;
  }

  async start(): Promise<void> {
    const bundle = await this.api.bundle();
    const ids = Object.keys(bundle.charts).sort();
    for (const id of ids) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = id;
      this.elements.chartSelect.appendChild(option);
    }
    this.elements.chartSelect.addEventListener("change", () => {
      void this.loadChart(this.elements.chartSelect.value, bundle.charts[this.elements.chartSelect.value]!.annotation);
    });
    this.elements.methodSelect.addEventListener("change", () => {
      if (this.state) {
        this.state.method = this.elements.methodSelect.value as Method;
        this.buildPanel();
        this.repaint();
      }
    });
    this.bindPointer();
    const first = ids[0]!;
    await this.loadChart(first, bundle.charts[first]!.annotation);
  }

  private async loadChart(chartId: string, annotation: AnnotationDoc): Promise<void> {
    this.annotation = annotation;
    await new Promise<void>((resolve, reject) => {
      this.image.onload = () => resolve();
      this.image.onerror = () => reject(new Error(`cannot load chart ${chartId}`));
      this.image.src = this.api.chartUrl(chartId);
    });
    this.state = {
      method: (this.elements.methodSelect.value as Method) || "dynamic-context",
      annotation,
      chartRect: rect(0, 0, 1, 1),
      overlaySettings: this.state?.overlaySettings ?? defaultOverlaySettings(),
      minimapSettings: this.state?.minimapSettings ?? defaultMinimapSettings(),
    };
    this.buildPanel();
    this.repaint();
  }

  private bindPointer(): void {
    const canvas = this.elements.canvas;
    canvas.addEventListener("pointermove", (event) => {
      const bounds = canvas.getBoundingClientRect();
      const x = (event.clientX - bounds.left) / bounds.width;
      const y = (event.clientY - bounds.top) / bounds.height;
      this.lastPointer = [x, y];
      const t = performance.now() - this.questionShownAt;
      const closed = this.cadence.push(x, y, t);
      if (closed && this.identity) this.queue.push(sampleLine(closed));
      this.repaint();
    });
    canvas.addEventListener("pointerleave", () => {
      this.lastPointer = null;
      this.repaint();
    });
    canvas.addEventListener("click", () => this.toggle());
    window.addEventListener("keydown", (event) => {
      if (event.key === "c") this.toggle();
    });
  }

  private toggle(): void {
    if (!this.state) return;
    if (this.state.method === "mini-map") {
      this.state.minimapSettings = toggleEnabled(this.state.minimapSettings);
    } else {
      this.state.overlaySettings = toggleEnabled(this.state.overlaySettings);
    }
    this.repaint();
  }

  private repaint(): void {
    const { canvas } = this.elements;
    const ctx = canvas.getContext("2d");
    if (!ctx || !this.state || !this.annotation) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.drawImage(this.image, 0, 0, canvas.width, canvas.height);
    if (!this.lastPointer) return;
    const doc = frameLayout(this.state, this.lastPointer);
    const settings =
      this.state.method === "mini-map" ? this.state.minimapSettings : this.state.overlaySettings;
    const ops = displayList(doc, settings);
    paint(ctx, this.image, this.state.chartRect, ops,
          this.annotation.image_width, this.annotation.image_height);
  }

  /** Settings panel: every control re-renders the sample chart on change. */
  private buildPanel(): void {
    const panel = this.elements.panel;
    panel.textContent = "";
    if (!this.state) return;
    const isMap = this.state.method === "mini-map";
    const settings = isMap ? this.state.minimapSettings : this.state.overlaySettings;
    const checks = isMap ? minimapChecks : overlayChecks;
    for (const [key, value] of Object.entries(settings)) {
      const row = document.createElement("label");
      row.className = "setting-row";
      row.textContent = `${key}: `;
      const input = document.createElement("input");
      if (typeof value === "boolean") {
        input.type = "checkbox";
        input.checked = value;
      } else if (Array.isArray(value)) {
        input.type = "text";
        input.value = value.join(",");
      } else {
        input.type = typeof value === "number" ? "number" : "text";
        input.step = "0.05";
        input.value = String(value);
      }
      input.addEventListener("change", () => {
        let parsed: unknown = input.value;
        if (input.type === "checkbox") parsed = input.checked;
        else if (input.type === "number") parsed = Number(input.value);
        else if (Array.isArray(value)) parsed = input.value.split(",").map(Number);
        try {
          const next = applySetting(settings as never, checks as never, key, parsed);
          if (isMap) this.state!.minimapSettings = next as MinimapSettings;
          else this.state!.overlaySettings = next as OverlaySettings;
          this.elements.panelError.textContent = "";
          this.buildPanel();
          this.repaint();
        } catch (error) {
          if (error instanceof SettingError) {
            this.elements.panelError.textContent = error.message;
          } else {
            throw error;
          }
        }
      });
      row.appendChild(input);
      panel.appendChild(row);
    }
  }

  /** Run one condition's quiz; streams traces and saves the session log. */
  async runQuiz(participant: string, condition: string, variant: string, seed: number): Promise<void> {
    const bundle = await this.api.bundle();
    const questions = bundle.questions[variant] as never[];
    const controller = new QuizController(questions, seed, () => performance.now() / 1000);
    const root = this.elements.quizRoot;
    root.hidden = false;

    while (!controller.finished) {
      const q = controller.showQuestion();
      this.questionShownAt = performance.now();
      this.identity = {
        participant_id: participant,
        condition,
        variant_tag: variant,
        question_id: (q as { question_id: string }).question_id,
      };
      this.uploader = new TraceUploader(this.queue, (lines) =>
        this.api.uploadTraceLines(this.identity!, lines).then(() => undefined),
      );
      const flusher = setInterval(() => void this.uploader?.flush(), 1000);
      await this.askQuestion(controller, q as never);
      const rest = this.cadence.flush();
      if (rest) this.queue.push(sampleLine(rest));
      clearInterval(flusher);
      await this.uploader.flush();
    }

    await this.api.saveSession({
      participant_id: participant,
      condition,
      variant_tag: variant,
      time_limit_s: controller.timeLimitS,
      shuffle_seed: seed,
      settings: (this.state?.method === "mini-map"
        ? this.state?.minimapSettings
        : this.state?.overlaySettings) as unknown as Record<string, unknown>,
      records: controller.records,
    });
    const breakTimer = new BreakTimer(() => performance.now() / 1000);
    this.elements.status.textContent =
      `Condition done. Break suggested: ${Math.ceil(breakTimer.remaining())}s (continue any time).`;
    root.hidden = true;
  }

  private askQuestion(controller: QuizController, q: { prompt: string; options: string[] }): Promise<void> {
    const root = this.elements.quizRoot;
    root.textContent = "";
    const prompt = document.createElement("p");
    prompt.textContent = q.prompt;
    const countdown = document.createElement("p");
    countdown.className = "countdown";
    root.append(prompt, countdown);
    return new Promise((resolve) => {
      const done = () => {
        clearInterval(timer);
        resolve();
      };
      const timer = setInterval(() => {
        countdown.textContent = `${Math.ceil(controller.remaining())} s`;
        if (controller.tick()) done(); // timeout advances to the next question
      }, 100);
      q.options.forEach((option, index) => {
        const button = document.createElement("button");
        button.textContent = option;
        button.addEventListener("click", () => {
          controller.answer(index);
          done();
        });
        root.appendChild(button);
      });
      const skip = document.createElement("button");
      skip.textContent = "Skip";
      skip.addEventListener("click", () => {
        controller.skip();
        done();
      });
      root.appendChild(skip);
    });
  }
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? "http://127.0.0.1:8765";
  const app = new App(server, {
    canvas: el("chart-canvas"),
    chartSelect: el("chart-select"),
    methodSelect: el("method-select"),
    panel: el("settings-panel"),
    panelError: el("settings-error"),
    quizRoot: el("quiz-root"),
    status: el("status"),
  });
  void app.start().catch((error) => {
    el("status").textContent = `cannot reach the study service: ${error}`;
  });
}

if (typeof document !== "undefined" && document.getElementById("chart-canvas")) {
  boot();
}
