import init, { temperature_curve, j2_curve, field_curve } from "./pkg/mixspin_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const num = (id) => Number(document.getElementById(id).value);

function compute() {
  const kind = document.querySelector("input[name=kind]:checked").value;
  const n = num("n"), j1 = num("j1"), j2 = num("j2"), b = num("b");
  const t = num("t"), hi = num("hi"), steps = num("steps");
  switch (kind) {
    case "t": return temperature_curve(n, j1, j2, b, Math.min(0.01, hi / 2), hi, steps);
    case "j2": return j2_curve(n, j1, t, hi, steps);
    default: return field_curve(n, j1, j2, t, hi, steps);
  }
}

// Negativity columns share one y axis; energy and ln Z are left out.
function plot(columns, width, values) {
  const canvas = document.getElementById("plot");
  const ctx = canvas.getContext("2d");
  const pad = { l: 60, r: 15, t: 15, b: 40 };
  const w = canvas.width - pad.l - pad.r, h = canvas.height - pad.t - pad.b;
  const rows = values.length / width;
  const xs = Array.from({ length: rows }, (_, i) => values[i * width]);
  const series = columns
    .map((name, k) => ({ name, k }))
    .filter((c) => c.name.startsWith("N_"));
  let ymax = 0;
  for (const { k } of series) for (let i = 0; i < rows; i++) ymax = Math.max(ymax, values[i * width + k]);
  ymax = ymax > 0 ? ymax * 1.05 : 1;
  const x0 = xs[0], x1 = xs[rows - 1];
  const sx = (x) => pad.l + ((x - x0) / (x1 - x0)) * w;
  const sy = (y) => pad.t + h - (y / ymax) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#000";
  ctx.strokeRect(pad.l, pad.t, w, h);
  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  ctx.textAlign = "center";
  for (let i = 0; i <= 5; i++) {
    const x = x0 + ((x1 - x0) * i) / 5;
    ctx.fillText(x.toPrecision(3), sx(x), pad.t + h + 16);
  }
  ctx.fillText(columns[0], pad.l + w / 2, pad.t + h + 34);
  ctx.textAlign = "right";
  for (let i = 0; i <= 4; i++) {
    const y = (ymax * i) / 4;
    ctx.fillText(y.toPrecision(3), pad.l - 6, sy(y) + 4);
  }

  const legend = document.getElementById("legend");
  legend.textContent = "";
  series.forEach(({ name, k }, s) => {
    ctx.strokeStyle = COLORS[s % COLORS.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    for (let i = 0; i < rows; i++) {
      const px = sx(xs[i]), py = sy(values[i * width + k]);
      if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
    }
    ctx.stroke();
    const item = document.createElement("span");
    item.style.color = ctx.strokeStyle;
    item.textContent = name;
    legend.appendChild(item);
  });
}

function run() {
  const status = document.getElementById("status");
  status.textContent = "";
  const start = performance.now();
  let curve;
  try {
    curve = compute();
  } catch (e) {
    status.textContent = String(e.message ?? e);
    return;
  }
  try {
    plot(curve.columns.split(","), curve.width, curve.values);
    document.getElementById("timing").textContent = `${(performance.now() - start).toFixed(0)} ms`;
  } finally {
    curve.free();
  }
}

await init();
document.getElementById("run").addEventListener("click", run);
run();
