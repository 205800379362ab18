import init, { bound_curve, dilation_sample, cross_ratio } from "./pkg/qannulus_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, e) {
  el.innerHTML = `<span class="err">${e.message ?? e}</span>`;
}

function parseR(s) {
  s = s.trim().toLowerCase();
  return s === "inf" || s === "infinity" ? Infinity : Number(s);
}

function drawCurve() {
  const out = $("curve-out");
  let data;
  try {
    data = JSON.parse(bound_curve(Number($("curve-min").value), Number($("curve-max").value), 400));
  } catch (e) {
    return fail(out, e);
  }
  const cv = $("curve"), ctx = cv.getContext("2d");
  const pad = 40, w = cv.width - 2 * pad, h = cv.height - 2 * pad;
  const pts = data.curve;
  const lx0 = Math.log(pts[0].r), lx1 = Math.log(pts[pts.length - 1].r);
  const yMax = Math.min(Math.max(...pts.map((p) => p.C_r)), 5), yMin = 1.8;
  const X = (r) => pad + (w * (Math.log(r) - lx0)) / (lx1 - lx0);
  const Y = (v) => pad + h - (h * (Math.min(v, yMax) - yMin)) / (yMax - yMin);

  ctx.clearRect(0, 0, cv.width, cv.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#444";
  ctx.fillText(yMax.toFixed(2), 4, pad + 4);
  ctx.fillText(yMin.toFixed(2), 4, pad + h);
  ctx.fillText(`r = ${pts[0].r.toFixed(2)}`, pad, pad + h + 16);
  ctx.fillText(`r = ${pts[pts.length - 1].r.toFixed(2)}  (log scale)`, pad + w - 120, pad + h + 16);

  const line = (f, color, width) => {
    ctx.beginPath();
    pts.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, X(p.r), Y(f(p))));
    ctx.strokeStyle = color;
    ctx.lineWidth = width;
    ctx.stroke();
    ctx.lineWidth = 1;
  };
  line(() => data.lower, "#888", 1);
  line((p) => p.C_r, "#c33", 1.5);
  line((p) => p.upper, "#27c", 3);

  const rs = data.crossover;
  if (rs > pts[0].r && rs < pts[pts.length - 1].r) {
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(X(rs), pad);
    ctx.lineTo(X(rs), pad + h);
    ctx.strokeStyle = "#555";
    ctx.stroke();
    ctx.setLineDash([]);
  }
  out.textContent = `crossover r* = ${rs.toFixed(6)}: above it C(r) improves on 1 + √2 = ${data.cited_upper.toFixed(6)}. C(∞) = ${data.C_inf}.`;
}

function drawSpectra() {
  const table = $("dil-table");
  let d;
  try {
    d = JSON.parse(dilation_sample(parseR($("dil-r").value), Number($("dil-dim").value), Number($("dil-seed").value)));
  } catch (e) {
    return fail(table, e);
  }
  const cv = $("spectra"), ctx = cv.getContext("2d");
  const all = [...d.spectrum_z, ...d.spectrum_w_star, ...d.spectrum_z_hat];
  const m = Math.max(1, ...all.map(([x, y]) => Math.hypot(x, y))) * 1.1;
  const c = cv.width / 2, s = c / m;
  const P = ([x, y]) => [c + s * x, c - s * y];

  ctx.clearRect(0, 0, cv.width, cv.height);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(0, c); ctx.lineTo(cv.width, c);
  ctx.moveTo(c, 0); ctx.lineTo(c, cv.height);
  ctx.stroke();
  ctx.strokeStyle = "#aaa";
  ctx.beginPath();
  ctx.arc(c, c, s, 0, 2 * Math.PI);
  ctx.stroke();
  if (Number.isFinite(d.r)) {
    ctx.beginPath();
    ctx.arc(c, c, s / (d.r * d.r), 0, 2 * Math.PI);
    ctx.stroke();
  }
  const dots = (pts, color, radius, fill) => {
    for (const p of pts) {
      const [x, y] = P(p);
      ctx.beginPath();
      ctx.arc(x, y, radius, 0, 2 * Math.PI);
      ctx.strokeStyle = ctx.fillStyle = color;
      fill ? ctx.fill() : ctx.stroke();
    }
  };
  dots(d.spectrum_z, "#27c", 7, false);
  dots(d.spectrum_w_star, "#2a2", 10, false);
  dots(d.spectrum_z_hat, "#c33", 3, true);

  const r = d.report;
  const rows = [
    ["‖Ẑ‖, ‖Ŵ‖", `${r.norm_z_hat.toFixed(12)}, ${r.norm_w_hat.toFixed(12)}`],
    ["(1) |‖Ẑ‖ − 1|", r.item1.toExponential(2)],
    ["(2) ‖ẐŴ − I/r²‖", r.item2.toExponential(2)],
    ["(3) σ(Ẑ) ⊆ σ(Z) ∪ σ(W*)", r.item3.toExponential(2)],
    ["(4) unitarity of (Ẑ + Ŵ*)/c", r.item4.toExponential(2)],
    ["(5) max ‖f(Z,W)‖ − ‖f(Ẑ,Ŵ)‖", r.item5.toExponential(2)],
    ["singular values of Ẑ", d.singular_values_z_hat.map((v) => v.toFixed(6)).join(" ")],
    ["all within 1e-8", r.passed ? "yes" : `no: ${r.failures.join("; ")}`],
  ];
  table.innerHTML = rows.map(([k, v]) => `<tr><td>${k}</td><td>${v}</td></tr>`).join("");
}

function evalCross() {
  const out = $("cross-out");
  try {
    const v = JSON.parse(cross_ratio(Number($("cross-eps").value)));
    out.textContent = `Z = W = (1 − eps)[[0, 1], [0, 0]], f = z + w: ‖f(Z,W)‖ / ‖f‖ = ${v.ratio.toFixed(12)} (certified ≥ ${v.certified_ratio.toFixed(12)})`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("curve-go").onclick = drawCurve;
$("dil-go").onclick = drawSpectra;
$("cross-go").onclick = evalCross;
drawCurve();
drawSpectra();
evalCross();
