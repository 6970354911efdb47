/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const car_heatmap: (a: number, b: number) => [number, number];
export const equivalence_explorer: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const truncation_spectrum: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
