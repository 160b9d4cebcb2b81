/* tslint:disable */
/* eslint-disable */

export class Compressed {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly psnr_db: number;
    readonly ranks: Uint32Array;
    readonly reduction_pct: number;
    readonly rgba: Uint8Array;
    readonly ssim: number;
}

/**
 * Compresses the RGB part of canvas pixel data; alpha comes back opaque.
 */
export function compress_rgba(width: number, height: number, rgba: Uint8Array, eps: number, tau: number, seed: bigint): Compressed;

/**
 * `[r_value, σ]` pairs; `r_value` is NaN past the detected rank.
 */
export function spectrum(kind: string, n: number, rank: number, seed: bigint, eps: number, tau: number): Float64Array;

/**
 * `[ε, rank, rel_err]` triples for ε = 10^lo … 10^hi on a synthetic matrix.
 */
export function sweep(kind: string, n: number, rank: number, seed: bigint, lo: number, hi: number, tau: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_compressed_free: (a: number, b: number) => void;
    readonly compress_rgba: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
    readonly compressed_psnr_db: (a: number) => number;
    readonly compressed_ranks: (a: number) => [number, number];
    readonly compressed_reduction_pct: (a: number) => number;
    readonly compressed_rgba: (a: number) => [number, number];
    readonly compressed_ssim: (a: number) => number;
    readonly spectrum: (a: number, b: number, c: number, d: number, e: bigint, f: number, g: number) => [number, number, number, number];
    readonly sweep: (a: number, b: number, c: number, d: number, e: bigint, f: number, g: number, h: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
