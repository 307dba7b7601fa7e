/**
 * Viewport application: wires the session state machine, orbit camera,
 * and debounced render loop to the DOM.
 *
 * Affordance legend (documented here and in the UI): after a pick, the
 * segment name is tinted GREEN when the active sphere protects it
 * (mask bit off) and RED when the sphere clips it (mask bit on).
 */

import { RenderClient, ServiceError } from "./api.js";
import type { DatasetInfo } from "./api.js";
import {
  cameraPlaneBasis,
  defaultOrbit,
  rotated,
  toCameraDoc,
  zoomed,
} from "./camera.js";
import type { OrbitState } from "./camera.js";
import { debounce } from "./debounce.js";
import type { SceneDoc, Vec3 } from "./scene.js";
import { DEFAULT_RENDER, IDENTITY_POSE, serializeScene } from "./scene.js";
import {
  canUndo,
  fixSphere,
  moveSphere,
  newSession,
  resizeSphere,
  snapshotScene,
  toggleLabel,
  undoFix,
} from "./session.js";
import type { ClientSession } from "./session.js";

const RENDER_DEBOUNCE_MS = 100;
const GREEN = "#2e7d32"; // protected: the active sphere will NOT remove it
const RED = "#c62828"; // clippable: the active sphere WILL remove it

export class CarveApp {
  private session!: ClientSession;
  private orbit!: OrbitState;
  private dataset!: DatasetInfo;
  private lastPickedLabel: number | null = null;
  private readonly renderQueue;

  constructor(
    private readonly client: RenderClient,
    private readonly root: HTMLElement,
  ) {
    this.renderQueue = debounce<SceneDoc>(
      (scene) => void this.fetchFrame(scene),
      RENDER_DEBOUNCE_MS,
    );
  }

  async start(): Promise<void> {
    const datasets = await this.client.getDatasets();
    if (datasets.length === 0) {
      this.banner("no datasets registered on the service");
      return;
    }
    this.dataset = datasets[0];
    const labelUniverse = Math.max(...this.dataset.labels.map((l) => l.id));
    const center = this.dataset.dims.map(
      (n, i) => ((n - 1) / 2) * this.dataset.spacing[i],
    ) as Vec3;
    const extent = Math.min(
      ...this.dataset.dims.map((n, i) => ((n - 1) / 2) * this.dataset.spacing[i]),
    );
    this.session = newSession(labelUniverse, center, extent / 2);
    this.orbit = defaultOrbit(center, extent * 6.4);
    this.buildDom();
    this.requestRender();
  }

  /** The scene document matching what is (or will be) displayed. */
  currentScene(): SceneDoc {
    const base: SceneDoc = {
      intensity: `${this.dataset.name}_intensity.nrrd`,
      labels: `${this.dataset.name}_labels.nrrd`,
      color_table: `${this.dataset.name}_colors.txt`,
      transfer_function: [
        [0, 0],
        [20, 0],
        [40, 0.6],
        [200, 0.9],
      ],
      pose: IDENTITY_POSE,
      spheres: [],
      camera: toCameraDoc(this.orbit),
      render: DEFAULT_RENDER,
    };
    return snapshotScene(this.session, base);
  }

  private requestRender(): void {
    this.renderQueue.call(this.currentScene());
    this.refreshPanel();
  }

  private async fetchFrame(scene: SceneDoc): Promise<void> {
    try {
      const blob = await this.client.renderColor(scene);
      if (blob === null) return; // superseded; a newer render is coming
      const img = this.root.querySelector<HTMLImageElement>("#viewport")!;
      const url = URL.createObjectURL(blob);
      const old = img.src;
      img.src = url;
      if (old.startsWith("blob:")) URL.revokeObjectURL(old);
      this.banner("");
    } catch (err) {
      this.banner(err instanceof ServiceError ? err.message : "service unreachable");
    }
  }

  private async onPick(px: number, py: number): Promise<void> {
    try {
      const picked = await this.client.pick(this.currentScene(), [px, py]);
      if (picked === null) return;
      const status = this.root.querySelector<HTMLElement>("#pick-status")!;
      if (picked.label === null) {
        this.lastPickedLabel = null;
        status.textContent = "no segment";
        status.style.color = "";
        return;
      }
      this.lastPickedLabel = picked.label;
      status.textContent = `${picked.name ?? "?"} (label ${picked.label})`;
      status.style.color = picked.active_mask_clippable ? RED : GREEN;
    } catch (err) {
      this.banner(err instanceof ServiceError ? err.message : "service unreachable");
    }
  }

  private togglePicked(): void {
    if (this.lastPickedLabel === null) return;
    this.session = toggleLabel(this.session, this.lastPickedLabel);
    const status = this.root.querySelector<HTMLElement>("#pick-status")!;
    const clippable = this.session.active.clippable[this.lastPickedLabel];
    status.style.color = clippable ? RED : GREEN;
    this.requestRender();
  }

  private buildDom(): void {
    this.root.innerHTML = `
      <div id="banner" role="alert"></div>
      <img id="viewport" width="${this.orbit.width}" height="${this.orbit.height}" alt="rendered volume">
      <div id="pick-status"></div>
      <div id="legend">pick tint: <span style="color:${GREEN}">green = protected</span>,
        <span style="color:${RED}">red = clippable</span></div>
      <div id="controls">
        <button id="fix">Fix sphere</button>
        <button id="undo">Undo</button>
        <button id="toggle">Toggle picked label</button>
        <button id="export">Export scene</button>
        <input id="radius" type="range" min="1" max="500" step="1">
      </div>
      <ul id="spheres"></ul>
    `;
    const img = this.root.querySelector<HTMLImageElement>("#viewport")!;

    let dragging: "orbit" | "sphere" | null = null;
    let last: [number, number] = [0, 0];
    img.addEventListener("mousedown", (e) => {
      dragging = e.shiftKey ? "sphere" : "orbit";
      last = [e.offsetX, e.offsetY];
    });
    img.addEventListener("mousemove", (e) => {
      if (!dragging) return;
      const dx = e.offsetX - last[0];
      const dy = e.offsetY - last[1];
      last = [e.offsetX, e.offsetY];
      if (dragging === "orbit") {
        this.orbit = rotated(this.orbit, -dx * 0.01, dy * 0.01);
      } else {
        // drag the active sphere in the camera-aligned plane
        const { right, up } = cameraPlaneBasis(this.orbit);
        const perPixel = this.orbit.distance / this.orbit.height;
        const c = this.session.active.center;
        this.session = moveSphere(this.session, [
          c[0] + (dx * right[0] - dy * up[0]) * perPixel,
          c[1] + (dx * right[1] - dy * up[1]) * perPixel,
          c[2] + (dx * right[2] - dy * up[2]) * perPixel,
        ]);
      }
      this.requestRender();
    });
    img.addEventListener("mouseup", () => (dragging = null));
    img.addEventListener("click", (e) => void this.onPick(e.offsetX, e.offsetY));
    img.addEventListener("wheel", (e) => {
      e.preventDefault();
      if (e.shiftKey) {
        this.session = resizeSphere(
          this.session,
          this.session.active.radius * (e.deltaY > 0 ? 0.9 : 1.1),
        );
      } else {
        this.orbit = zoomed(this.orbit, e.deltaY > 0 ? 1.1 : 0.9);
      }
      this.requestRender();
    });

    this.root.querySelector("#fix")!.addEventListener("click", () => {
      this.session = fixSphere(this.session);
      this.requestRender();
    });
    this.root.querySelector("#undo")!.addEventListener("click", () => {
      if (canUndo(this.session)) {
        this.session = undoFix(this.session);
        this.requestRender();
      }
    });
    this.root
      .querySelector("#toggle")!
      .addEventListener("click", () => this.togglePicked());
    this.root.querySelector("#export")!.addEventListener("click", () => {
      const blob = new Blob([serializeScene(this.currentScene())], {
        type: "application/json",
      });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = "scene.json";
      a.click();
      URL.revokeObjectURL(a.href);
    });
    const radius = this.root.querySelector<HTMLInputElement>("#radius")!;
    radius.addEventListener("input", () => {
      this.session = resizeSphere(this.session, Number(radius.value));
      this.requestRender();
    });
  }

  private refreshPanel(): void {
    const undo = this.root.querySelector<HTMLButtonElement>("#undo");
    if (undo) undo.disabled = !canUndo(this.session);
    const radius = this.root.querySelector<HTMLInputElement>("#radius");
    if (radius) radius.value = String(this.session.active.radius);
    const list = this.root.querySelector<HTMLElement>("#spheres");
    if (!list) return;
    const describe = (clippable: readonly boolean[]) =>
      clippable
        .map((on, label) => (on ? String(label) : null))
        .filter((s) => s !== null)
        .join(",");
    // fixed spheres render as read-only rows; only the active row is live
    list.innerHTML = [
      ...this.session.fixed.map(
        (s, i) =>
          `<li>fixed #${i + 1}: r=${s.radius.toFixed(1)} clips [${describe(s.clippable)}]</li>`,
      ),
      `<li>active: r=${this.session.active.radius.toFixed(1)} clips [${describe(this.session.active.clippable)}]</li>`,
    ].join("");
  }

  private banner(message: string): void {
    const el = this.root.querySelector<HTMLElement>("#banner");
    if (el) el.textContent = message;
  }
}
