/**
 * Client-side replica of the carving session.
 *
 * Mirrors the server's contract: one mutable *active* sphere, a stack of
 * *fixed* spheres that are frozen once pushed, per-label clip masks,
 * radius clamped to [R_MIN, R_MAX], and fixing spawning a copy at
 * SHRINK_FACTOR of the radius with a cloned mask. All operations return
 * a new session; nothing is mutated in place.
 */

import type { SceneDoc, SphereDoc, Vec3 } from "./scene.js";

export const R_MIN = 1.0;
export const R_MAX = 500.0;
export const SHRINK_FACTOR = 0.75;

export interface ClipSphere {
  readonly center: Vec3;
  readonly radius: number;
  /** clippable[label] === true means this sphere removes that label. */
  readonly clippable: readonly boolean[];
}

export interface ClientSession {
  readonly fixed: readonly ClipSphere[];
  readonly active: ClipSphere;
  /** Highest label id in the dataset; masks cover 0..labelUniverse. */
  readonly labelUniverse: number;
}

export function clampRadius(radius: number): number {
  return Math.min(R_MAX, Math.max(R_MIN, radius));
}

function allClippable(labelUniverse: number): boolean[] {
  return new Array(labelUniverse + 1).fill(true);
}

export function newSession(
  labelUniverse: number,
  center: Vec3 = [0, 0, 0],
  radius = 50,
): ClientSession {
  return {
    fixed: [],
    active: {
      center: [...center] as Vec3,
      radius: clampRadius(radius),
      clippable: allClippable(labelUniverse),
    },
    labelUniverse,
  };
}

export function toggleLabel(sess: ClientSession, label: number): ClientSession {
  if (label < 0 || label > sess.labelUniverse) {
    throw new RangeError(`label ${label} outside 0..${sess.labelUniverse}`);
  }
  const clippable = [...sess.active.clippable];
  clippable[label] = !clippable[label];
  return { ...sess, active: { ...sess.active, clippable } };
}

export function resetMask(sess: ClientSession, value: boolean): ClientSession {
  const clippable = new Array(sess.labelUniverse + 1).fill(value);
  return { ...sess, active: { ...sess.active, clippable } };
}

export function moveSphere(sess: ClientSession, center: Vec3): ClientSession {
  return { ...sess, active: { ...sess.active, center: [...center] as Vec3 } };
}

export function resizeSphere(sess: ClientSession, radius: number): ClientSession {
  return { ...sess, active: { ...sess.active, radius: clampRadius(radius) } };
}

/** Deposit the active sphere; the replacement shrinks and clones the mask. */
export function fixSphere(sess: ClientSession): ClientSession {
  const fixed = sess.active;
  return {
    ...sess,
    fixed: [...sess.fixed, fixed],
    active: {
      center: [...fixed.center] as Vec3,
      radius: clampRadius(fixed.radius * SHRINK_FACTOR),
      clippable: [...fixed.clippable],
    },
  };
}

export function canUndo(sess: ClientSession): boolean {
  return sess.fixed.length > 0;
}

export function undoFix(sess: ClientSession): ClientSession {
  if (!canUndo(sess)) {
    throw new Error("no fixed spheres to remove");
  }
  return { ...sess, fixed: sess.fixed.slice(0, -1) };
}

function toSphereDoc(s: ClipSphere): SphereDoc {
  const clipped_labels: number[] = [];
  s.clippable.forEach((on, label) => {
    if (on) clipped_labels.push(label);
  });
  return { center: [...s.center] as Vec3, radius: s.radius, clipped_labels };
}

/** Scene spheres in render order: fixed spheres first, active last. */
export function sessionSpheres(sess: ClientSession): SphereDoc[] {
  return [...sess.fixed, sess.active].map(toSphereDoc);
}

/** The exportable scene for the current state: what /render receives. */
export function snapshotScene(sess: ClientSession, base: SceneDoc): SceneDoc {
  return { ...base, spheres: sessionSpheres(sess) };
}
