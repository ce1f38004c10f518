/** Wire types mirroring the session service's JSON schema (schema_version 1). */

export type NodeRef = string | [number, number];

export type EdgeEntry = [NodeRef, NodeRef, boolean];

export interface TopologyObj {
  features: string[];
  hidden: number[];
  activation: string;
  edges: EdgeEntry[];
}

export interface Measurements {
  mec_bits: number;
  demand_bits: number;
  generalization: number;
  balance: number;
  bias_flagged: boolean;
  acc_positive: number;
  acc_negative: number;
  bias_detail: string;
}

export interface SessionDescriptor {
  schema_version: number;
  session_id: string;
  state: "idle" | "running" | "paused";
  step: number;
  created_at: string;
  topology: TopologyObj;
  config: Record<string, number | string>;
  dataset: { source: string; n: number; noise: number; seed: number; train_fraction: number };
  measurements: Measurements;
}

export interface MetricsFrame {
  step: number;
  train_loss: number;
  test_loss: number;
  accuracy: number;
  acc_positive: number;
  acc_negative: number;
  mec_bits: number;
  demand_bits: number;
  generalization: number;
  balance: number;
  bias_flagged: boolean;
}

export type EditPayload =
  | { kind: "toggle_edge"; source: NodeRef; target: NodeRef }
  | { kind: "add_skip_edge"; source: NodeRef; target: NodeRef }
  | { kind: "remove_edge"; source: NodeRef; target: NodeRef }
  | { kind: "set_width"; layer: number; width: number }
  | { kind: "add_layer"; width: number; position?: number }
  | { kind: "remove_layer"; layer: number }
  | { kind: "set_activation"; activation: string }
  | { kind: "set_features"; features: string[] };

export interface PatchResponse {
  descriptor: SessionDescriptor;
  measurements: Measurements;
}

export function nodeKey(node: NodeRef): string {
  return typeof node === "string" ? node : `n${node[0]}.${node[1]}`;
}

export function sameNode(a: NodeRef, b: NodeRef): boolean {
  return nodeKey(a) === nodeKey(b);
}
