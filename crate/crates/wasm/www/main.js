import init, { runSearch, oracle, harmonyBounds } from "./pkg/plum_wasm.js";

const $ = (id) => document.getElementById(id);

const example = {
  algorithm: "hs",
  initial_prompt: "write a short poem about the sea",
  scorer: { kind: "keyword", targets: ["verse", "sea", "vivid"] },
  edits: {
    extra_phrases: ["vivid", "calm"],
    paraphrases: { poem: ["verse", "song"], short: ["brief"] },
  },
  search: { max_iterations: 30, candidates: 5, patience: 10 },
  seed: 7,
};

function showError(el, err) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  el.appendChild(p);
}

function currentConfig() {
  const cfg = JSON.parse($("config").value);
  cfg.algorithm = $("algorithm").value;
  cfg.seed = Number($("seed").value);
  return cfg;
}

function drawCurve(values) {
  const c = $("curve");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (values.length === 0) return;
  const pad = 20;
  const x = (i) => pad + (i * (c.width - 2 * pad)) / Math.max(1, values.length - 1);
  const y = (v) => c.height - pad - v * (c.height - 2 * pad);
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
  ctx.strokeStyle = "#2a6f97";
  ctx.lineWidth = 2;
  ctx.beginPath();
  values.forEach((v, i) => (i === 0 ? ctx.moveTo(x(i), y(v)) : ctx.lineTo(x(i), y(v))));
  ctx.stroke();
}

function search() {
  const out = $("search-out");
  try {
    const s = JSON.parse(runSearch(JSON.stringify(currentConfig())));
    const score = s.result_score === null ? "none" : s.result_score.toFixed(4);
    out.innerHTML = "";
    const p = document.createElement("p");
    p.textContent = `${s.result}  (score ${score}, ${s.calls} calls, ${s.iterations} iterations, stopped: ${s.stop_reason})`;
    out.appendChild(p);
    $("trace").textContent = s.trace;
    drawCurve(s.best_curve);
  } catch (e) {
    showError(out, e);
  }
}

function enumerate() {
  const out = $("oracle-out");
  try {
    const o = JSON.parse(oracle(JSON.stringify(currentConfig()), Number($("depth").value)));
    out.textContent = `${o.reachable} reachable prompts; best: "${o.optimum}" (score ${o.score.toFixed(4)})`;
  } catch (e) {
    showError(out, e);
  }
}

const palette = ["#ffd6a5", "#caffbf", "#9bf6ff", "#bdb2ff", "#ffc6ff", "#fdffb6", "#a0c4ff", "#ffadad"];

function slices() {
  const len = Number($("len").value);
  const ks = Number($("ks").value);
  $("len-v").textContent = len;
  $("ks-v").textContent = ks;
  const bounds = JSON.parse(harmonyBounds(len, ks));
  const el = $("slices");
  el.innerHTML = "";
  bounds.forEach(([start, end], j) => {
    for (let t = start; t <= end; t++) {
      const span = document.createElement("span");
      span.style.background = palette[j % palette.length];
      span.textContent = `s${t}`;
      span.title = `slice ${j + 1}: segments ${start}..${end}`;
      el.appendChild(span);
    }
  });
}

await init();
$("config").value = JSON.stringify(example, null, 2);
$("run").addEventListener("click", search);
$("oracle").addEventListener("click", enumerate);
$("len").addEventListener("input", slices);
$("ks").addEventListener("input", slices);
slices();
