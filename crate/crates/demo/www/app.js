import init, { symmetry_profile, chi_compare, scaling_curve } from "./pkg/symlab_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.x), ys = series.flatMap((s) => s.y);
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x0 === x1) x1 = x0 + 1;
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(4), 2, pad);
  ctx.fillText(y0.toPrecision(4), 2, h - pad);
  ctx.fillText(String(x0), pad, h - pad + 14);
  ctx.fillText(String(x1), w - pad - 40, h - pad + 14);
  if (opts.xlabel) ctx.fillText(opts.xlabel, w / 2 - 30, h - 6);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    if (s.dots) {
      s.x.forEach((x, i) => ctx.fillRect(sx(x) - 2, sy(s.y[i]) - 2, 4, 4));
    } else {
      ctx.beginPath();
      s.x.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(s.y[i])) : ctx.moveTo(sx(x), sy(s.y[i]))));
      ctx.stroke();
    }
  }
}

function guarded(outId, fn) {
  const out = $(outId);
  out.classList.remove("error");
  try {
    out.textContent = fn();
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e.message ?? e);
  }
}

function runProfile() {
  guarded("p-out", () => {
    const r = JSON.parse(symmetry_profile($("p-fn").value, num("p-n"), num("p-h"), num("p-q")));
    const x = r.values.map((_, i) => r.x0 + i);
    plot($("p-plot"), [{ x, y: r.values, color: "#1565c0" }], { xlabel: "x" });
    return `${r.function}: I = ${r.integral}  continuous = ${r.integral_continuous}\n` +
      `I/(N h) = ${r.ratio.toFixed(4)}  h^2 <= N: ${r.theorem_regime}`;
  });
}

function runChi() {
  guarded("c-out", () => {
    const r = JSON.parse(chi_compare(num("c-q"), num("c-h"), num("c-x"), num("c-k")));
    const x = r.direct.map((_, i) => r.x0 + i);
    plot($("c-plot"), [
      { x, y: r.fourier, color: "#c62828" },
      { x, y: r.direct, color: "#1565c0", dots: true },
    ], { xlabel: "x" });
    return `max |direct - fourier| = ${r.max_err.toExponential(3)} over ${x.length} points, ${r.terms} sine terms`;
  });
}

function runScaling() {
  guarded("s-out", () => {
    const r = JSON.parse(scaling_curve($("s-fn").value, num("s-k0"), num("s-k1"), num("s-e")));
    const x = r.rows.map((row) => Math.log2(row.N));
    plot($("s-plot"), [{ x, y: r.rows.map((row) => row.ratio), color: "#2e7d32", dots: true }], { xlabel: "log2 N" });
    const table = r.rows.map((row) => `N=${row.N} h=${row.h} I/(Nh)=${row.ratio.toFixed(4)}`).join("\n");
    const fit = r.fit
      ? `slope ${r.fit.slope.toFixed(4)}  r^2 ${r.fit.r_squared.toFixed(5)}`
      : "no fit (fewer than 3 nonzero integrals)";
    return `${table}\nlog I vs log(N h): ${fit}`;
  });
}

await init();
$("p-run").onclick = runProfile;
$("c-run").onclick = runChi;
$("s-run").onclick = runScaling;
runProfile();
runChi();
runScaling();
