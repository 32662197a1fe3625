import init, { conditional, probability, refute } from "./pkg/condalg_wasm.js";

const $ = (id) => document.getElementById(id);

function show(id, json, fmt) {
  const out = $(id);
  const r = JSON.parse(json);
  out.className = r.ok ? "" : "err";
  out.textContent = r.ok ? fmt(r) : "error: " + r.error;
}

function stages(r) {
  return r.stages.map((s) => `stage ${s.index}: ${s.atoms.join(" ")}`).join("\n");
}

await init();

$("c-run").onclick = () =>
  show("c-out", conditional($("c-atoms").value, $("c-x").value, $("c-y").value),
    (r) => `[x]y = ${r.element}@${r.stage}\n\n${stages(r)}`);

$("p-run").onclick = () =>
  show("p-out", probability($("p-atoms").value, $("p-masses").value, $("p-expr").value),
    (r) => `P = ${r.value}   (${r.field}, element ${r.element}@${r.stage})`);

$("s-run").onclick = () =>
  show("s-out", refute($("s-seq").value, Number($("s-budget").value) || 0),
    (r) => r.refuted
      ? `refuted after ${r.tried} valuations\nbase {${r.base.join(",")}}` +
        r.history.map((h) => ` extended by ${h}`).join("") + `\n${r.valuation}`
      : `no counterexample in ${r.tried} valuations`);

for (const b of ["c-run", "p-run", "s-run"]) $(b).click();
