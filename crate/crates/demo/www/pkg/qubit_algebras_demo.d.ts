/* tslint:disable */
/* eslint-disable */

/**
 * Residual of the relations between modes `r` and `s`, for every pair on a
 * chain of `sites` modes, against the dense truncation.
 */
export function car_heatmap(sites: number, corrupt: boolean): string;

/**
 * Family A has tail `bloch(polar_a, azimuth_a)` and family B tail
 * `bloch(polar_b, azimuth_b)`; both carry the same two overrides. Returns
 * the verdict for that pair and the tail term for every B tail on a
 * `resolution × resolution` grid of (polar, azimuth).
 */
export function equivalence_explorer(polar_a: number, azimuth_a: number, polar_b: number, azimuth_b: number, resolution: number): string;

/**
 * Singular values of π(f) on a finite truncation, for a random function f
 * drawn from `seed` on an orbit of up to eight points over `sites` flip
 * sites, together with its I-norm. The largest singular value is a lower
 * bound for the represented norm and never exceeds the I-norm.
 */
export function truncation_spectrum(seed: number, sites: number, max_entries: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly car_heatmap: (a: number, b: number) => [number, number];
    readonly equivalence_explorer: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly truncation_spectrum: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
