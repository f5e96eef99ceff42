import init, { wigner_panel, fidelity_curve, gate_profile } from "./pkg/cvpoly_web.js";

const $ = (id) => document.getElementById(id);
const HALF = 6;
const POINTS = 121;
const COLORS = { ideal: "#000", bare: "#888", method1: "#c0392b", method2: "#2471a3" };

function params() {
  return { nu: parseFloat($("nu").value), db: parseFloat($("db").value) };
}

function report(err) {
  $("status").textContent = err ? String(err.message ?? err) : "";
}

// diverging map, white at zero
function color(v, scale) {
  const t = Math.max(-1, Math.min(1, v / scale));
  const c = Math.round(255 * (1 - Math.abs(t)));
  return t >= 0 ? [255, c, c] : [c, c, 255];
}

function drawWigner() {
  const { nu, db } = params();
  const w = wigner_panel($("panel").value, nu, db, HALF, POINTS);
  const canvas = $("wigner");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(POINTS, POINTS);
  let lo = Infinity, hi = -Infinity;
  for (const v of w) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const scale = Math.max(hi, -lo);
  // q runs left to right, p bottom to top
  for (let iq = 0; iq < POINTS; iq++) {
    for (let ip = 0; ip < POINTS; ip++) {
      const [r, g, b] = color(w[iq * POINTS + ip], scale);
      const k = 4 * ((POINTS - 1 - ip) * POINTS + iq);
      img.data.set([r, g, b, 255], k);
    }
  }
  const off = new OffscreenCanvas(POINTS, POINTS);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  $("wigner-info").textContent = `q, p in [-${HALF}, ${HALF}]; min W = ${lo.toExponential(3)}`;
}

function axes(ctx, box, xr, yr, xlabel) {
  const { x0, y0, w, h } = box;
  ctx.strokeStyle = "#444";
  ctx.strokeRect(x0, y0, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  for (let i = 0; i <= 4; i++) {
    const y = yr[0] + (yr[1] - yr[0]) * i / 4;
    ctx.fillText(y.toFixed(2), 4, y0 + h - h * i / 4 + 4);
    const x = xr[0] + (xr[1] - xr[0]) * i / 4;
    ctx.fillText(x.toFixed(1), x0 + w * i / 4 - 8, y0 + h + 16);
  }
  ctx.fillText(xlabel, x0 + w / 2, y0 + h + 32);
}

function line(ctx, box, xr, yr, xs, ys, stroke, dash = []) {
  const { x0, y0, w, h } = box;
  ctx.strokeStyle = stroke;
  ctx.setLineDash(dash);
  ctx.beginPath();
  xs.forEach((x, i) => {
    const px = x0 + w * (x - xr[0]) / (xr[1] - xr[0]);
    const py = y0 + h - h * (ys[i] - yr[0]) / (yr[1] - yr[0]);
    i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

function legend(ctx, entries, x, y) {
  entries.forEach(([name, c], i) => {
    ctx.fillStyle = c;
    ctx.fillRect(x, y + 16 * i - 8, 12, 3);
    ctx.fillText(name, x + 18, y + 16 * i);
  });
}

function drawFidelity() {
  const { nu, db } = params();
  const family = $("family").value;
  const canvas = $("fidelity");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const box = { x0: 50, y0: 10, w: canvas.width - 170, h: canvas.height - 50 };
  const xs = [...Array(11).keys()];
  axes(ctx, box, [0, 10], [0, 1], family === "fock" ? "n" : "|α|²");
  for (const m of ["bare", "method1", "method2"]) {
    line(ctx, box, [0, 10], [0, 1], xs, Array.from(fidelity_curve(m, family, nu, db)), COLORS[m]);
  }
  legend(ctx, [["Taylor", COLORS.bare], ["method 1", COLORS.method1], ["method 2", COLORS.method2]],
    box.x0 + box.w + 12, 24);
}

function drawProfile() {
  const { nu, db } = params();
  const n = 201;
  const raw = gate_profile(nu, db, -4, 4, n);
  const mag = $("show-mag").checked;
  const q = [], cols = [[], [], []];
  for (let i = 0; i < n; i++) {
    const row = raw.subarray(7 * i, 7 * i + 7);
    q.push(row[0]);
    for (let c = 0; c < 3; c++) cols[c].push(mag ? row[2 + 2 * c] : row[1 + 2 * c]);
  }
  const ideal = q.map((x) => {
    if (mag) return 1;
    const a = nu * x * x * x;
    return Math.atan2(Math.sin(a), Math.cos(a));
  });
  const canvas = $("profile");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const box = { x0: 50, y0: 10, w: canvas.width - 170, h: canvas.height - 50 };
  const yr = mag ? [0, 1.5] : [-Math.PI, Math.PI];
  const clip = (ys) => ys.map((y) => Math.max(yr[0], Math.min(yr[1], y)));
  axes(ctx, box, [-4, 4], yr, "q");
  line(ctx, box, [-4, 4], yr, q, ideal, COLORS.ideal, [4, 3]);
  line(ctx, box, [-4, 4], yr, q, clip(cols[0]), COLORS.bare);
  line(ctx, box, [-4, 4], yr, q, clip(cols[1]), COLORS.method1);
  line(ctx, box, [-4, 4], yr, q, clip(cols[2]), COLORS.method2);
  legend(ctx, [["ideal", COLORS.ideal], ["Taylor", COLORS.bare], ["method 1", COLORS.method1], ["method 2", COLORS.method2]],
    box.x0 + box.w + 12, 24);
}

function redraw(which) {
  $("nu-val").textContent = $("nu").value;
  $("db-val").textContent = $("db").value;
  try {
    for (const f of which) f();
    report(null);
  } catch (e) {
    report(e);
  }
}

const all = [drawWigner, drawFidelity, drawProfile];
await init();
$("nu").addEventListener("change", () => redraw(all));
$("db").addEventListener("change", () => redraw(all));
$("nu").addEventListener("input", () => redraw([drawProfile]));
$("db").addEventListener("input", () => redraw([drawProfile]));
$("panel").addEventListener("change", () => redraw([drawWigner]));
$("family").addEventListener("change", () => redraw([drawFidelity]));
$("show-mag").addEventListener("change", () => redraw([drawProfile]));
redraw(all);
