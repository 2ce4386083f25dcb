/* tslint:disable */
/* eslint-disable */

/**
 * NMI against the planted truth per step, overlap-driven transfer against
 * first-order transfer.
 */
export function compare_transfer(seed: bigint, timesteps: number, stride: number, pop_size: number, generations: number): string;

export function decode_genotype(edges: string, genes: string): string;

/**
 * Overlap-ratio matrix of a SYNFIX network.
 */
export function similarity_heatmap(seed: bigint, timesteps: number, stride: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly compare_transfer: (a: bigint, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly decode_genotype: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly similarity_heatmap: (a: bigint, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
