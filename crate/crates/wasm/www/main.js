import init, { generateRegion, planRoute, detectTarget, simulateRoute } from "./pkg/mowsearch_wasm.js";

const $ = (id) => document.getElementById(id);
const stats = $("stats");

function settings() {
  return [$("region").value, $("algorithm").value, $("motion").value];
}

function show(text, isError = false) {
  stats.textContent = text;
  stats.className = isError ? "error" : "";
}

function guard(fn) {
  return (...args) => {
    try {
      fn(...args);
    } catch (e) {
      show(String(e.message ?? e), true);
    }
  };
}

function drawCurve(curve, total) {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  if (curve.length === 0) return;
  const tmax = Math.max(total, 1e-9);
  ctx.strokeStyle = "#1f77b4";
  ctx.beginPath();
  ctx.moveTo(0, h);
  let y = h;
  for (const [t, c] of curve) {
    const x = (t / tmax) * (w - 2);
    ctx.lineTo(x, y);
    y = h - c * (h - 4);
    ctx.lineTo(x, y);
  }
  ctx.lineTo(w, y);
  ctx.stroke();
}

function showSvg(svg) {
  $("drawing").innerHTML = svg;
  $("drawing").querySelector("svg").addEventListener("click", guard(onClick));
}

const generate = guard(() => {
  const json = generateRegion(Number($("seed").value) >>> 0, $("preset").value);
  $("region").value = JSON.stringify(JSON.parse(json), null, 1);
  plan();
});

const plan = guard(() => {
  const out = JSON.parse(planRoute(...settings()));
  showSvg(out.svg);
  drawCurve(out.curve, out.length);
  const e = out.expected_T === null ? "infinite (not everything covered)" : out.expected_T.toFixed(3);
  show(`pixels ${out.node_count}\nroute length ${out.length.toFixed(2)}\ncovered area ${out.covered.toFixed(2)}\nexpected detection time ${e}`);
});

function onClick(event) {
  const svg = event.currentTarget;
  const pt = svg.createSVGPoint();
  pt.x = event.clientX;
  pt.y = event.clientY;
  const p = pt.matrixTransform(svg.getScreenCTM().inverse());
  // drawings flip the y axis
  const [x, y] = [p.x, -p.y];
  const out = JSON.parse(detectTarget(...settings(), $("cutter").value, x, y));
  showSvg(out.svg);
  const where = `target (${x.toFixed(2)}, ${y.toFixed(2)})${out.inside ? "" : " outside the region"}`;
  show(out.time === null ? `${where}\nnever detected` : `${where}\ndetected at t = ${out.time.toFixed(3)}`);
}

const simulate = guard(() => {
  const out = JSON.parse(
    simulateRoute(...settings(), $("cutter").value, Number($("trials").value) >>> 0, Number($("simseed").value) >>> 0),
  );
  const r = out.report;
  const e = out.expected_T === null ? "infinite" : out.expected_T.toFixed(3);
  show(
    `trials ${r.trials}, undetected ${r.undetected}\nmean ${r.mean.toFixed(3)} ± ${out.standard_error.toFixed(3)}\nstd ${r.std.toFixed(3)}\npixel-model expectation ${e}`,
  );
});

await init();
$("generate").addEventListener("click", generate);
$("plan").addEventListener("click", plan);
$("simulate").addEventListener("click", simulate);
generate();
