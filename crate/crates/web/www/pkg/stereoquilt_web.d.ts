/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Intermediate view at `t` in [0, 1] between the stereo halves.
     */
    morph(t: number): Uint8Array;
    /**
     * Native image for the given lenticular calibration.
     */
    native(pitch: number, slope: number, center: number): Uint8Array;
    /**
     * Hue quilt of 32 views of `tile_width`×`tile_height`, a panel of
     * `panel_width`×`panel_height`, and a stereo pair of
     * `pair_width`×`pair_height` with its flow already estimated.
     */
    constructor(panel_width: number, panel_height: number, tile_width: number, tile_height: number, pair_width: number, pair_height: number);
    quilt(): Uint8Array;
    /**
     * Each subpixel channel lit in proportion to its view number.
     */
    view_map(pitch: number, slope: number, center: number): Uint8Array;
    readonly pair_height: number;
    readonly pair_width: number;
    readonly panel_height: number;
    readonly panel_width: number;
    readonly quilt_height: number;
    readonly quilt_width: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_morph: (a: number, b: number) => [number, number, number, number];
    readonly demo_native: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly demo_pair_height: (a: number) => number;
    readonly demo_pair_width: (a: number) => number;
    readonly demo_panel_height: (a: number) => number;
    readonly demo_panel_width: (a: number) => number;
    readonly demo_quilt: (a: number) => [number, number];
    readonly demo_quilt_height: (a: number) => number;
    readonly demo_quilt_width: (a: number) => number;
    readonly demo_view_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
