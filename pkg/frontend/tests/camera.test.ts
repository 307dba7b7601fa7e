import { describe, expect, it } from "vitest";

import {
  cameraPlaneBasis,
  defaultOrbit,
  orbitPosition,
  rotated,
  toCameraDoc,
  zoomed,
} from "../src/camera.js";

describe("orbit camera", () => {
  it("yaw 0 / pitch 0 sits on +z of the target", () => {
    const state = defaultOrbit([10, 20, 30], 100);
    expect(orbitPosition(state)).toEqual([10, 20, 130]);
  });

  it("keeps the distance to the target under rotation", () => {
    let state = defaultOrbit([1, 2, 3], 50);
    for (const [dy, dp] of [
      [0.3, 0.1],
      [-1.2, 0.4],
      [2.0, -0.9],
    ]) {
      state = rotated(state, dy, dp);
      const [x, y, z] = orbitPosition(state);
      const d = Math.hypot(x - 1, y - 2, z - 3);
      expect(d).toBeCloseTo(50, 10);
    }
  });

  it("clamps pitch short of the poles", () => {
    const state = rotated(defaultOrbit([0, 0, 0], 10), 0, 10);
    expect(state.pitchRad).toBeLessThan(Math.PI / 2);
    const down = rotated(state, 0, -20);
    expect(down.pitchRad).toBeGreaterThan(-Math.PI / 2);
  });

  it("zoom scales distance and never reaches zero", () => {
    const state = defaultOrbit([0, 0, 0], 10);
    expect(zoomed(state, 0.5).distance).toBe(5);
    expect(zoomed(state, 1e-9).distance).toBeGreaterThan(0);
  });

  it("produces a camera document aimed at the target", () => {
    const doc = toCameraDoc(rotated(defaultOrbit([4, 5, 6], 20, 128), 1.1, 0.3));
    expect(doc.look_at).toEqual([4, 5, 6]);
    expect(doc.up).toEqual([0, 1, 0]);
    expect(doc.width).toBe(128);
    expect(doc.height).toBe(128);
    const d = Math.hypot(
      doc.position[0] - 4,
      doc.position[1] - 5,
      doc.position[2] - 6,
    );
    expect(d).toBeCloseTo(20, 10);
  });

  it("camera-plane basis is orthonormal and screen-aligned", () => {
    const state = rotated(defaultOrbit([0, 0, 0], 10), 0.7, 0.2);
    const { right, up } = cameraPlaneBasis(state);
    const dot = right[0] * up[0] + right[1] * up[1] + right[2] * up[2];
    expect(dot).toBeCloseTo(0, 10);
    expect(Math.hypot(...right)).toBeCloseTo(1, 10);
    expect(Math.hypot(...up)).toBeCloseTo(1, 10);
    // dragging "up" on screen should have a positive world-y component
    expect(up[1]).toBeGreaterThan(0);
  });
});
