/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_morph: (a: number, b: number) => [number, number, number, number];
export const demo_native: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const demo_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const demo_pair_height: (a: number) => number;
export const demo_pair_width: (a: number) => number;
export const demo_panel_height: (a: number) => number;
export const demo_panel_width: (a: number) => number;
export const demo_quilt: (a: number) => [number, number];
export const demo_quilt_height: (a: number) => number;
export const demo_quilt_width: (a: number) => number;
export const demo_view_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
