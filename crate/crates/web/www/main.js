import init, { certify, count_table, gf, catalog_names } from "./pkg/shallowperm_web.js";

const $ = (id) => document.getElementById(id);

function table(header, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const c of r) tr.insertCell().textContent = c;
  }
  return t;
}

function drawDiagram(word, highlight) {
  const canvas = $("diagram");
  const ctx = canvas.getContext("2d");
  const n = word.length;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (n === 0) return;
  const cell = canvas.width / n;
  ctx.strokeStyle = "#eee";
  for (let i = 0; i <= n; i++) {
    ctx.beginPath(); ctx.moveTo(i * cell, 0); ctx.lineTo(i * cell, canvas.height); ctx.stroke();
    ctx.beginPath(); ctx.moveTo(0, i * cell); ctx.lineTo(canvas.width, i * cell); ctx.stroke();
  }
  ctx.strokeStyle = "#ccc";
  ctx.beginPath(); ctx.moveTo(0, canvas.height); ctx.lineTo(canvas.width, 0); ctx.stroke();
  word.forEach((v, i) => {
    ctx.fillStyle = i + 1 === highlight ? "#b00020" : "#222";
    ctx.beginPath();
    ctx.arc((i + 0.5) * cell, canvas.height - (v - 0.5) * cell, Math.max(3, cell / 5), 0, 2 * Math.PI);
    ctx.fill();
  });
}

function runCertify() {
  const summary = $("certify-summary");
  const steps = $("steps");
  steps.replaceChildren();
  try {
    const v = JSON.parse(certify($("perm").value));
    summary.className = v.shallow ? "good" : "bad";
    summary.textContent = `${v.shallow ? "shallow" : "not shallow"}: I = ${v.inversions}, T = ${v.reflection_length}, D = ${v.displacement}`;
    drawDiagram(v.word, v.steps.length ? v.steps[0].position_of_max : 0);
    for (const s of v.steps) {
      const li = document.createElement("li");
      const moved = s.moved_value === null ? "max appended" : `value ${s.moved_value} moves to position ${s.position_of_max}`;
      li.textContent = `${s.before.join(",")}: ${moved}, ${s.classification}`;
      if (s.classification === "Violation") li.className = "bad";
      li.onmouseenter = () => drawDiagram(s.before, s.position_of_max);
      steps.appendChild(li);
    }
  } catch (e) {
    summary.className = "bad";
    summary.textContent = e.message ?? String(e);
    drawDiagram([], 0);
  }
}

function runCount() {
  $("count-error").textContent = "";
  $("count-table").replaceChildren();
  try {
    const by = $("count-by").value;
    const v = JSON.parse(count_table(Number($("count-n").value), $("count-avoid").value, by));
    if (!by) {
      $("count-table").appendChild(table(["n", "count"], v.totals.map((c, i) => [i + 1, c])));
      return;
    }
    const offset = by === "descents" ? 0 : 1;
    const width = v.n_max + (offset === 0 ? 0 : 1);
    const header = ["n"].concat(Array.from({ length: width - offset }, (_, k) => `k=${k + offset}`), ["total"]);
    const rows = v.cells.map((row, i) => {
      const padded = row.concat(Array(width - offset - row.length).fill(""));
      return [i + 1, ...padded, v.totals[i]];
    });
    $("count-table").appendChild(table(header, rows));
  } catch (e) {
    $("count-error").textContent = e.message ?? String(e);
  }
}

function runGf() {
  $("gf-error").textContent = "";
  $("gf-table").replaceChildren();
  try {
    const v = JSON.parse(gf($("gf-name").value, Number($("gf-order").value)));
    const width = Math.max(...v.rows.map((r) => r.length));
    const header = v.statistic_variable
      ? [v.size_variable + " power"].concat(Array.from({ length: width }, (_, k) => `${v.statistic_variable}^${k}`))
      : [v.size_variable + " power", "coefficient"];
    const rows = v.rows.map((r, n) => [n, ...r.concat(Array(width - r.length).fill(""))]);
    $("gf-table").appendChild(table(header, rows));
  } catch (e) {
    $("gf-error").textContent = e.message ?? String(e);
  }
}

await init();
for (const name of JSON.parse(catalog_names())) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = name;
  $("gf-name").appendChild(opt);
}
$("certify-form").onsubmit = (e) => { e.preventDefault(); runCertify(); };
$("count-form").onsubmit = (e) => { e.preventDefault(); runCount(); };
$("gf-form").onsubmit = (e) => { e.preventDefault(); runGf(); };
runCertify();
runCount();
runGf();
