/**
 * Thin client for the stateless render service.
 *
 * The service is a pure function of the request, so the only state here
 * is bookkeeping: monotonically increasing sequence ids let callers
 * discard responses that were superseded while in flight (at most one
 * render and one pick are outstanding at a time).
 */

import type { SceneDoc } from "./scene.js";
import { serializeScene } from "./scene.js";

export interface DatasetLabel {
  id: number;
  name: string;
}

export interface DatasetInfo {
  name: string;
  dims: [number, number, number];
  spacing: [number, number, number];
  labels: DatasetLabel[];
}

export interface PickResponse {
  label: number | null;
  name: string | null;
  position: [number, number, number] | null;
  active_mask_clippable: boolean | null;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(`service error ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function raiseForStatus(resp: Response): Promise<Response> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ServiceError(resp.status, detail);
  }
  return resp;
}

export class RenderClient {
  private renderSeq = 0;
  private pickSeq = 0;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async getDatasets(): Promise<DatasetInfo[]> {
    const resp = await raiseForStatus(
      await this.fetchImpl(`${this.baseUrl}/datasets`),
    );
    return (await resp.json()) as DatasetInfo[];
  }

  /**
   * Fetch the color buffer (PNG bytes) for a scene. Resolves to null when
   * a newer render was issued while this one was in flight.
   */
  async renderColor(scene: SceneDoc): Promise<Blob | null> {
    const seq = ++this.renderSeq;
    const resp = await raiseForStatus(
      await this.fetchImpl(`${this.baseUrl}/render?part=color`, {
        method: "POST",
        body: serializeScene(scene),
      }),
    );
    const blob = await resp.blob();
    return seq === this.renderSeq ? blob : null;
  }

  /** Fetch the first-hit segment buffer (16-bit PGM bytes) for a scene. */
  async renderSeg(scene: SceneDoc): Promise<ArrayBuffer> {
    const resp = await raiseForStatus(
      await this.fetchImpl(`${this.baseUrl}/render?part=seg`, {
        method: "POST",
        body: serializeScene(scene),
      }),
    );
    return resp.arrayBuffer();
  }

  /** Pick the first visible segment under a pixel; null when superseded. */
  async pick(scene: SceneDoc, pixel: [number, number]): Promise<PickResponse | null> {
    const seq = ++this.pickSeq;
    const resp = await raiseForStatus(
      await this.fetchImpl(`${this.baseUrl}/pick`, {
        method: "POST",
        body: JSON.stringify({ scene, pixel }),
      }),
    );
    const doc = (await resp.json()) as PickResponse;
    return seq === this.pickSeq ? doc : null;
  }
}
