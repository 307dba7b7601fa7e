/** Scene document types, structurally identical to the server's schema. */

export type Vec3 = [number, number, number];

export interface SphereDoc {
  center: Vec3;
  radius: number;
  clipped_labels: number[];
}

export interface CameraDoc {
  position: Vec3;
  look_at: Vec3;
  up: Vec3;
  vfov_deg: number;
  width: number;
  height: number;
}

export interface ShadingDoc {
  ka: number;
  kd: number;
  ks: number;
  shininess: number;
}

export interface RenderDoc {
  step_size_voxels: number;
  early_term_alpha: number;
  tau_hit: number;
  aa_enabled: boolean;
  shading: ShadingDoc;
}

export interface PoseDoc {
  translation: Vec3;
  rotation: [number, number, number, number]; // w, x, y, z
  scale: number;
}

export interface SceneDoc {
  intensity: string;
  labels: string;
  color_table: string;
  transfer_function: [number, number][];
  pose: PoseDoc;
  spheres: SphereDoc[];
  camera: CameraDoc;
  render: RenderDoc;
}

export const DEFAULT_RENDER: RenderDoc = {
  step_size_voxels: 0.5,
  early_term_alpha: 0.99,
  tau_hit: 0.05,
  aa_enabled: true,
  shading: { ka: 0.2, kd: 0.7, ks: 0.3, shininess: 32 },
};

export const IDENTITY_POSE: PoseDoc = {
  translation: [0, 0, 0],
  rotation: [1, 0, 0, 0],
  scale: 1.0,
};

/** Serialize a scene for POST /render or file export. */
export function serializeScene(scene: SceneDoc): string {
  return JSON.stringify(scene, null, 2);
}
