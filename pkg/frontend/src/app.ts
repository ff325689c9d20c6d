import type * as L from "leaflet";
import { getHealth, postQuery } from "./api";
import type { AppConfig } from "./config";
import { MapView } from "./mapView";
import { PlanPanel } from "./planPanel";
import type { ChatTurn, QueryResponse } from "./types";

const STORAGE_KEY = "geode-session";

function newSessionId(): string {
  if (typeof crypto !== "undefined" && crypto.randomUUID) return crypto.randomUUID();
  return `s-${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 10)}`;
}

interface AppOptions {
  mapOptions?: L.MapOptions;
}

/**
 * Session client: chat log, input, map, plan panel. One query in flight
 * at a time; turns are kept in submission order, which is the order the
 * service recorded them, and survive a reload via sessionStorage.
 */
export class App {
  readonly cfg: AppConfig;
  readonly mapView: MapView;
  readonly planPanel: PlanPanel;
  readonly input: HTMLInputElement;
  readonly sendButton: HTMLButtonElement;
  readonly log: HTMLElement;
  readonly status: HTMLElement;
  turns: ChatTurn[] = [];
  sessionId: string;
  private busy = false;
  private pendingMarker: HTMLElement | null = null;

  constructor(root: HTMLElement, cfg: AppConfig, options: AppOptions = {}) {
    this.cfg = cfg;
    root.classList.add("app-root");
    root.innerHTML = `
      <header class="top-bar">
        <h1>geode</h1>
        <span class="service-status"></span>
      </header>
      <main class="layout">
        <section class="chat-area">
          <div class="chat-log"></div>
          <form class="chat-form">
            <input class="chat-input" type="text" autocomplete="off"
                   placeholder="Ask about places, rain, air quality...">
            <button class="chat-send" type="submit" disabled>ask</button>
          </form>
        </section>
        <section class="map-area"><div class="map-canvas"></div></section>
        <section class="plan-area"></section>
      </main>`;

    this.log = root.querySelector(".chat-log") as HTMLElement;
    this.input = root.querySelector(".chat-input") as HTMLInputElement;
    this.sendButton = root.querySelector(".chat-send") as HTMLButtonElement;
    this.status = root.querySelector(".service-status") as HTMLElement;
    this.mapView = new MapView(
      root.querySelector(".map-canvas") as HTMLElement, cfg, options.mapOptions);
    this.planPanel = new PlanPanel(root.querySelector(".plan-area") as HTMLElement);

    const form = root.querySelector(".chat-form") as HTMLFormElement;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.input.addEventListener("input", () => this.syncControls());

    this.sessionId = this.restore();
    this.checkHealth();
  }

  async submit(): Promise<void> {
    const text = this.input.value.trim();
    if (!text || this.busy) return;

    this.busy = true;
    this.syncControls();
    this.pushTurn({ role: "user", text });
    this.showPending();

    try {
      const outcome = await postQuery(this.cfg, text, this.sessionId);
      if (outcome.kind === "answer") {
        this.acceptAnswer(outcome.body);
        this.input.value = "";
      } else {
        this.pushTurn({ role: "engine", text: outcome.message, errors: outcome.diagnostics });
        this.planPanel.showFailure(outcome.message, outcome.diagnostics);
      }
    } catch (err: any) {
      const note = `service unreachable: ${err?.message ?? err}`;
      this.pushTurn({ role: "engine", text: note, errors: [] });
      this.planPanel.showFailure(note, []);
    } finally {
      this.busy = false;
      this.hidePending();
      this.syncControls();
      this.persist();
      this.input.focus();
    }
  }

  private acceptAnswer(body: QueryResponse) {
    this.pushTurn({
      role: "engine",
      text: body.elaboration ? `${body.answer}\n${body.elaboration}` : body.answer,
      map: body.map,
      plan: body.plan,
    });
    this.mapView.show(body.map);
    this.planPanel.showPlan(body.plan);
  }

  private pushTurn(turn: ChatTurn) {
    this.turns.push(turn);
    this.renderTurn(turn);
  }

  private renderTurn(turn: ChatTurn) {
    const el = document.createElement("div");
    el.className = `turn turn-${turn.role}`;
    if (turn.errors) el.classList.add("turn-error");
    for (const line of turn.text.split("\n")) {
      const p = document.createElement("p");
      p.textContent = line;
      el.appendChild(p);
    }
    this.log.appendChild(el);
    this.log.scrollTop = this.log.scrollHeight;
  }

  private showPending() {
    this.pendingMarker = document.createElement("div");
    this.pendingMarker.className = "turn turn-pending";
    this.pendingMarker.textContent = "thinking...";
    this.log.appendChild(this.pendingMarker);
  }

  private hidePending() {
    this.pendingMarker?.remove();
    this.pendingMarker = null;
  }

  private syncControls() {
    this.input.disabled = this.busy;
    this.sendButton.disabled = this.busy || !this.input.value.trim();
  }

  private checkHealth() {
    getHealth(this.cfg).then(
      (health) => {
        this.status.textContent = `service ${health.status} · ${health.net_mode}/${health.backend}`;
      },
      () => {
        this.status.textContent = "service unreachable";
        this.status.classList.add("status-down");
      },
    );
  }

  private persist() {
    try {
      sessionStorage.setItem(STORAGE_KEY, JSON.stringify({
        id: this.sessionId,
        turns: this.turns,
      }));
    } catch {
      // Storage may be unavailable or full; the session just won't survive a reload.
    }
  }

  private restore(): string {
    let saved: { id: string; turns: ChatTurn[] } | null = null;
    try {
      const raw = sessionStorage.getItem(STORAGE_KEY);
      if (raw) saved = JSON.parse(raw);
    } catch {
      saved = null;
    }
    if (!saved || !Array.isArray(saved.turns) || typeof saved.id !== "string") {
      return newSessionId();
    }

    this.turns = saved.turns;
    for (const turn of this.turns) this.renderTurn(turn);
    const lastShown = [...this.turns].reverse().find((t) => t.map || t.plan || t.errors);
    if (lastShown?.map) this.mapView.show(lastShown.map);
    if (lastShown?.plan) {
      this.planPanel.showPlan(lastShown.plan);
    } else if (lastShown?.errors) {
      this.planPanel.showFailure(lastShown.text, lastShown.errors);
    }
    return saved.id;
  }
}
