/** Orbit camera: yaw/pitch/distance around a target point. */

import type { CameraDoc, Vec3 } from "./scene.js";

export interface OrbitState {
  target: Vec3;
  yawRad: number;
  pitchRad: number;
  distance: number;
  vfovDeg: number;
  width: number;
  height: number;
}

const PITCH_LIMIT = Math.PI / 2 - 1e-3; // stay off the poles so up stays valid
const MIN_DISTANCE = 1e-3;

export function defaultOrbit(target: Vec3, distance: number, size = 256): OrbitState {
  return {
    target,
    yawRad: 0,
    pitchRad: 0,
    distance,
    vfovDeg: 45,
    width: size,
    height: size,
  };
}

export function rotated(state: OrbitState, dYaw: number, dPitch: number): OrbitState {
  const pitch = Math.min(PITCH_LIMIT, Math.max(-PITCH_LIMIT, state.pitchRad + dPitch));
  return { ...state, yawRad: state.yawRad + dYaw, pitchRad: pitch };
}

export function zoomed(state: OrbitState, factor: number): OrbitState {
  return { ...state, distance: Math.max(MIN_DISTANCE, state.distance * factor) };
}

/** Camera position on the orbit sphere; yaw 0 / pitch 0 looks down -z. */
export function orbitPosition(state: OrbitState): Vec3 {
  const { target, yawRad, pitchRad, distance } = state;
  const cp = Math.cos(pitchRad);
  return [
    target[0] + distance * cp * Math.sin(yawRad),
    target[1] + distance * Math.sin(pitchRad),
    target[2] + distance * cp * Math.cos(yawRad),
  ];
}

export function toCameraDoc(state: OrbitState): CameraDoc {
  return {
    position: orbitPosition(state),
    look_at: [...state.target] as Vec3,
    up: [0, 1, 0],
    vfov_deg: state.vfovDeg,
    width: state.width,
    height: state.height,
  };
}

/**
 * Basis vectors of the camera plane (right, up), for dragging the active
 * sphere parallel to the screen.
 */
export function cameraPlaneBasis(state: OrbitState): { right: Vec3; up: Vec3 } {
  const pos = orbitPosition(state);
  const fwd = normalize([
    state.target[0] - pos[0],
    state.target[1] - pos[1],
    state.target[2] - pos[2],
  ]);
  const right = normalize(cross(fwd, [0, 1, 0]));
  const up = cross(right, fwd);
  return { right, up };
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const m = Math.hypot(v[0], v[1], v[2]);
  return m > 0 ? [v[0] / m, v[1] / m, v[2] / m] : [0, 0, 0];
}
