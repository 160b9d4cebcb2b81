/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_compressed_free: (a: number, b: number) => void;
export const compress_rgba: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number];
export const compressed_psnr_db: (a: number) => number;
export const compressed_ranks: (a: number) => [number, number];
export const compressed_reduction_pct: (a: number) => number;
export const compressed_rgba: (a: number) => [number, number];
export const compressed_ssim: (a: number) => number;
export const spectrum: (a: number, b: number, c: number, d: number, e: bigint, f: number, g: number) => [number, number, number, number];
export const sweep: (a: number, b: number, c: number, d: number, e: bigint, f: number, g: number, h: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
