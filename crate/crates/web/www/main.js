import init, { kahlerProfile, unitarityTable, flowCheck } from "./pkg/kahlerflow_web.js";

const num = (form, name) => Number(form.querySelector(`[name=${name}]`).value);
const checked = (form, name) => form.querySelector(`[name=${name}]`).checked;
const fmt = (x) => (Math.abs(x) < 1e-3 || Math.abs(x) >= 1e4 ? x.toExponential(3) : x.toFixed(6));

function table(headers, rows) {
  const head = `<tr>${headers.map((h) => `<th>${h}</th>`).join("")}</tr>`;
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${typeof c === "number" ? fmt(c) : c}</td>`).join("")}</tr>`).join("");
  return `<table>${head}${body}</table>`;
}

function wire(id, compute) {
  const form = document.getElementById(id);
  const status = form.querySelector(".status");
  const out = form.querySelector(".out");
  form.querySelector("button").addEventListener("click", () => {
    status.textContent = "computing…";
    status.classList.remove("error");
    setTimeout(() => {
      const start = performance.now();
      try {
        compute(form, out);
        status.textContent = `${(performance.now() - start).toFixed(0)} ms`;
      } catch (e) {
        status.textContent = String(e.message ?? e);
        status.classList.add("error");
      }
    }, 10);
  });
}

function plot(canvas, rows) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const rmax = rows[rows.length - 1].r || 1;
  const series = [
    { key: "min_eig", color: "#1f77b4" },
    { key: "density", color: "#d62728" },
  ];
  const logs = rows.flatMap((r) => series.map((s) => Math.log10(r[s.key])));
  const lo = Math.min(...logs), hi = Math.max(...logs);
  const y = (v) => h - 20 - ((Math.log10(v) - lo) / (hi - lo || 1)) * (h - 40);
  const x = (r) => 40 + (r / rmax) * (w - 60);
  ctx.font = "12px system-ui";
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    rows.forEach((r, i) => (i ? ctx.lineTo(x(r.r), y(r[s.key])) : ctx.moveTo(x(r.r), y(r[s.key]))));
    ctx.stroke();
  }
  ctx.fillStyle = "#1f77b4";
  ctx.fillText("smallest eigenvalue of W (log scale)", 50, 14);
  ctx.fillStyle = "#d62728";
  ctx.fillText("half-form density", 300, 14);
  ctx.fillStyle = "#444";
  ctx.fillText("|y| = 0", 30, h - 4);
  ctx.fillText(`|y| = ${rmax}`, w - 70, h - 4);
}

await init();

wire("profile", (f, out) => {
  const res = JSON.parse(
    kahlerProfile(num(f, "tau_re"), num(f, "tau_im"), num(f, "sigma_re"), num(f, "sigma_im"), num(f, "f0"), checked(f, "soft"), num(f, "angle"), num(f, "radius"), 80),
  );
  plot(f.querySelector("canvas"), res.rows);
  const every = res.rows.filter((_, i) => i % 10 === 0);
  const worst = Math.max(...res.rows.map((r) => r.oracle_rel_err));
  out.innerHTML =
    `<p>largest relative gap between the closed-form density and the frame determinant: ${fmt(worst)}</p>` +
    table(["|y|", "min eig W", "density", "oracle gap"], every.map((r) => [r.r, r.min_eig, r.density, r.oracle_rel_err]));
});

wire("unitarity", (f, out) => {
  const res = JSON.parse(unitarityTable(num(f, "sigma_re"), num(f, "sigma_im"), num(f, "f0"), Number(f.querySelector("[name=spin]").value)));
  const worst = Math.max(...res.rows.map((r) => Math.abs(r.dim_times_norm - 1)));
  out.innerHTML =
    `<p>max |dim·‖Uπ‖² − 1| = ${fmt(worst)}, largest off-diagonal Gram entry ${fmt(res.max_off_diagonal)}, ${res.nodes} nodes on the torus direction</p>` +
    table(["spin", "j", "k", "‖Uπ_jk‖²", "dim · ‖Uπ_jk‖²"], res.rows.map((r) => [r.spin, r.row, r.column, r.norm_squared, r.dim_times_norm]));
});

wire("flows", (f, out) => {
  const res = JSON.parse(flowCheck(num(f, "t"), num(f, "s"), num(f, "f0"), checked(f, "soft"), num(f, "samples"), num(f, "seed")));
  out.innerHTML = table(["samples", "max |φ_h∘φ_f − φ_f∘φ_h|", "max deviation from RK4"], [[res.samples, res.commutator, res.rk4_deviation]]);
});
