/** App wiring: one module-level state record, re-rendered wholesale after
 * every server round trip. All game legality lives on the server (and in
 * store.ts's pre-checks); this file only moves data between the DOM and
 * the client.
 */

import { ApiError, Client } from "./api.js";
import type { BoardView, ErrorBody, GraphSpec } from "./api.js";
import {
  applyError,
  applyHint,
  applyView,
  decideToggle,
  initialState,
  newlyBurnt,
  parseFireInput,
  statusLine,
  traceFilename,
  type UiState,
} from "./store.js";
import { boardSvg } from "./render.js";

interface BoardPreset {
  label: string;
  graph: GraphSpec;
}

const PRESETS: BoardPreset[] = [
  { label: "square lattice Z^2", graph: { kind: "group", group: "free-abelian", params: { rank: 2 } } },
  { label: "line Z", graph: { kind: "group", group: "free-abelian", params: { rank: 1 } } },
  { label: "cubic lattice Z^3", graph: { kind: "group", group: "free-abelian", params: { rank: 3 } } },
  { label: "quadrant grid", graph: { kind: "family", family: "grid", params: { dim: 2 } } },
  { label: "3-regular tree", graph: { kind: "family", family: "regular-tree", params: { degree: 3 } } },
  { label: "free group F2", graph: { kind: "group", group: "free", params: { rank: 2 } } },
  { label: "Heisenberg group", graph: { kind: "group", group: "heisenberg", params: {} } },
  { label: "lamplighter group", graph: { kind: "group", group: "lamplighter", params: {} } },
  { label: "Baumslag-Solitar BS(1,2)", graph: { kind: "group", group: "bs12", params: {} } },
  { label: "bead chain", graph: { kind: "family", family: "bead-chain", params: { profile: "doubling" } } },
  { label: "path of 9", graph: { kind: "family", family: "path", params: { n: 9 } } },
  { label: "star with 5 leaves", graph: { kind: "family", family: "star", params: { leaves: 5 } } },
];

let state: UiState = initialState;
let client: Client | null = null;
let sessionId: string | null = null;
let busy = false;

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function render(): void {
  const view = state.view;
  element<HTMLElement>("status").textContent = statusLine(view);

  const banner = element<HTMLElement>("banner");
  if (view?.contained) {
    banner.hidden = false;
    banner.textContent =
      `Contained at turn ${view.contained_at}: ` +
      `${view.fire_size} vertices burnt, ${view.total_protected} protected.`;
  } else {
    banner.hidden = true;
  }

  const board = element<HTMLElement>("board");
  board.innerHTML =
    view === null
      ? '<p class="placeholder">create a game to begin</p>'
      : boardSvg(view, state.hint, state.flash);

  const pendingBox = element<HTMLElement>("pending");
  pendingBox.textContent =
    view === null || view.pending.length === 0 ? "nothing staged" : view.pending.join("  ");

  const errorBox = element<HTMLElement>("error");
  if (state.lastError === null) {
    errorBox.hidden = true;
    errorBox.textContent = "";
  } else {
    errorBox.hidden = false;
    const extra = state.lastError.offending.length > 0 ? ` [${state.lastError.offending.join(", ")}]` : "";
    errorBox.textContent = `${state.lastError.code}: ${state.lastError.detail}${extra}`;
  }

  element<HTMLElement>("log").textContent = state.log.slice(-12).join("\n");

  const haveGame = view !== null && !busy;
  element<HTMLButtonElement>("step").disabled = !haveGame || view.contained;
  element<HTMLButtonElement>("hint").disabled = !haveGame || view.contained;
  element<HTMLButtonElement>("export").disabled = view === null || busy;
  element<HTMLButtonElement>("create").disabled = busy;
}

function fail(error: unknown): void {
  const body: ErrorBody =
    error instanceof ApiError
      ? error.body
      : { code: "network-error", detail: String(error), offending: [] };
  state = applyError(state, body);
}

async function call(work: () => Promise<void>): Promise<void> {
  if (busy) {
    return;
  }
  busy = true;
  render();
  try {
    await work();
  } catch (error) {
    fail(error);
  } finally {
    busy = false;
    render();
  }
}

function readSetup(): {
  graph: GraphSpec;
  fire: string[] | { ball: number };
  schedule: { C: string; d: number };
  view_radius: number;
} {
  const preset = PRESETS[element<HTMLSelectElement>("preset").selectedIndex] ?? PRESETS[0]!;
  const fire = parseFireInput(
    element<HTMLInputElement>("fire-ids").value,
    Number(element<HTMLInputElement>("fire-ball").value),
  );
  const c = element<HTMLInputElement>("schedule-c").value.trim() || "0";
  const d = Math.max(0, Number(element<HTMLInputElement>("schedule-d").value) || 0);
  const radius = Math.min(30, Math.max(1, Number(element<HTMLInputElement>("view-radius").value) || 6));
  return { graph: preset.graph, fire, schedule: { C: c, d }, view_radius: radius };
}

async function createGame(): Promise<void> {
  await call(async () => {
    const base = element<HTMLInputElement>("service-url").value.trim().replace(/\/+$/, "");
    client = new Client(base);
    const setup = readSetup();
    const created = await client.createSession(setup);
    sessionId = created.id;
    state = applyView(initialState, created.view, `new game on ${created.view.vertices.length}-vertex window`);
  });
}

async function toggleVertex(id: string): Promise<void> {
  const decision = decideToggle(state.view, id);
  if (decision.action === "reject") {
    state = applyError(state, { code: "local-check", detail: decision.reason, offending: [id] });
    render();
    return;
  }
  await call(async () => {
    if (client === null || sessionId === null) {
      return;
    }
    const view: BoardView =
      decision.action === "protect"
        ? await client.protect(sessionId, [decision.id])
        : await client.protect(sessionId, [], [decision.id]);
    state = applyView(state, view);
  });
}

async function stepGame(): Promise<void> {
  await call(async () => {
    if (client === null || sessionId === null) {
      return;
    }
    const previous = state.view;
    const staged = previous?.pending ?? [];
    const view = await client.step(sessionId);
    const note = `turn ${view.time}: protected [${staged.join(", ")}], fire ${view.fire_size}`;
    state = applyView(
      state,
      view,
      view.contained ? `${note} - contained` : note,
      newlyBurnt(previous, view),
    );
  });
}

async function askHint(): Promise<void> {
  // the hint is an overlay toggle: asking again hides it
  if (state.hint.length > 0) {
    state = applyHint(state, []);
    render();
    return;
  }
  await call(async () => {
    if (client === null || sessionId === null) {
      return;
    }
    const response = await client.hint(sessionId);
    state = applyHint(state, response.hint);
    state = {
      ...state,
      log: [...state.log, response.hint.length > 0 ? `hint: ${response.hint.join(", ")}` : "hint: nothing to add"],
    };
  });
}

async function exportTrace(): Promise<void> {
  await call(async () => {
    if (client === null || sessionId === null) {
      return;
    }
    const text = await client.trace(sessionId);
    const blob = new Blob([text], { type: "application/jsonl" });
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement("a");
    anchor.href = url;
    anchor.download = traceFilename(state.view);
    anchor.click();
    URL.revokeObjectURL(url);
    state = { ...state, log: [...state.log, `exported ${anchor.download}`] };
  });
}

/** Wheel zoom and background drag pan, implemented on the svg viewBox.
 * A re-render (any server round trip) refits the board to the window.
 */
function wireBoardNavigation(board: HTMLElement): void {
  let drag: { x: number; y: number } | null = null;

  const svgOf = (): SVGSVGElement | null => board.querySelector("svg");
  const boxOf = (svg: SVGSVGElement): number[] =>
    (svg.getAttribute("viewBox") ?? "0 0 1 1").split(" ").map(Number);
  const setBox = (svg: SVGSVGElement, box: number[]): void => {
    svg.setAttribute("viewBox", box.map((n) => n.toFixed(4)).join(" "));
  };

  board.addEventListener(
    "wheel",
    (event) => {
      const svg = svgOf();
      if (svg === null) {
        return;
      }
      event.preventDefault();
      const [x, y, w, h] = boxOf(svg) as [number, number, number, number];
      const scale = event.deltaY > 0 ? 1.2 : 1 / 1.2;
      const rect = svg.getBoundingClientRect();
      const fx = rect.width > 0 ? (event.clientX - rect.left) / rect.width : 0.5;
      const fy = rect.height > 0 ? (event.clientY - rect.top) / rect.height : 0.5;
      setBox(svg, [x + w * (1 - scale) * fx, y + h * (1 - scale) * fy, w * scale, h * scale]);
    },
    { passive: false },
  );

  board.addEventListener("pointerdown", (event) => {
    // vertices keep their click-to-select behaviour; the background pans
    if ((event.target as Element | null)?.closest("[data-id]")) {
      return;
    }
    drag = { x: event.clientX, y: event.clientY };
    board.setPointerCapture(event.pointerId);
  });
  board.addEventListener("pointermove", (event) => {
    const svg = svgOf();
    if (drag === null || svg === null) {
      return;
    }
    const [x, y, w, h] = boxOf(svg) as [number, number, number, number];
    const rect = svg.getBoundingClientRect();
    if (rect.width === 0 || rect.height === 0) {
      return;
    }
    setBox(svg, [
      x - ((event.clientX - drag.x) * w) / rect.width,
      y - ((event.clientY - drag.y) * h) / rect.height,
      w,
      h,
    ]);
    drag = { x: event.clientX, y: event.clientY };
  });
  const stop = (): void => {
    drag = null;
  };
  board.addEventListener("pointerup", stop);
  board.addEventListener("pointercancel", stop);
}

function wire(): void {
  const preset = element<HTMLSelectElement>("preset");
  for (const { label } of PRESETS) {
    const option = document.createElement("option");
    option.textContent = label;
    preset.append(option);
  }

  element<HTMLButtonElement>("create").addEventListener("click", () => void createGame());
  element<HTMLButtonElement>("step").addEventListener("click", () => void stepGame());
  element<HTMLButtonElement>("hint").addEventListener("click", () => void askHint());
  element<HTMLButtonElement>("export").addEventListener("click", () => void exportTrace());

  const board = element<HTMLElement>("board");
  board.addEventListener("click", (event) => {
    const target = (event.target as Element | null)?.closest("[data-id]");
    const id = target?.getAttribute("data-id");
    if (id) {
      void toggleVertex(id);
    }
  });
  wireBoardNavigation(board);

  render();
}

wire();
