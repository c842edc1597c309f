import init, { Demo } from "./pkg/stereoquilt_web.js";

const $ = (id) => document.getElementById(id);

function paint(canvas, width, height, rgba) {
  canvas.width = width;
  canvas.height = height;
  const data = new ImageData(new Uint8ClampedArray(rgba.buffer, rgba.byteOffset, rgba.length), width, height);
  canvas.getContext("2d").putImageData(data, 0, 0);
}

function showValues() {
  for (const out of document.querySelectorAll("output")) {
    out.value = $(out.htmlFor).value;
  }
}

await init();
const demo = new Demo(320, 200, 64, 32, 256, 128);
$("status").textContent = "";

paint($("quilt"), demo.quilt_width, demo.quilt_height, demo.quilt());

function renderNative() {
  const args = ["pitch", "slope", "center"].map((id) => Number($(id).value));
  const map = $("show-map").checked;
  const rgba = map ? demo.view_map(...args) : demo.native(...args);
  $("native-caption").textContent = map ? "view number per subpixel" : "native image";
  paint($("native"), demo.panel_width, demo.panel_height, rgba);
}

function renderMorph() {
  paint($("morph"), demo.pair_width, demo.pair_height, demo.morph(Number($("t").value)));
}

for (const id of ["pitch", "slope", "center", "show-map"]) {
  $(id).addEventListener("input", () => { showValues(); renderNative(); });
}
$("t").addEventListener("input", () => { showValues(); renderMorph(); });

showValues();
renderNative();
renderMorph();
