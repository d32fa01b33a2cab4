/* tslint:disable */
/* eslint-disable */

/**
 * Total payload bytes (uplink + downlink) for each database size;
 * `setup` is `flat`, `matrix` or `iter`. Sizes a setup cannot handle give
 * `NaN`.
 */
export function comm_curve(scheme: string, setup: string, chunks: number, sizes: Uint32Array): Float64Array;

/**
 * Base-field rank of the HHWZ query matrix with each row deleted in turn.
 */
export function hhwz_rank_profile(b: number, seed: bigint): Float64Array;

/**
 * Runs one query/reply/extract round on a random database and describes it.
 */
export function run_round(scheme: string, b: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly comm_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly hhwz_rank_profile: (a: number, b: bigint) => [number, number, number, number];
    readonly run_round: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
