import init, { histogram, grade, verify } from "./pkg/branchlab_web.js";

const $ = (id) => document.getElementById(id);

function el(tag, attrs = {}, ...children) {
  const e = document.createElement(tag);
  Object.assign(e, attrs);
  e.append(...children);
  return e;
}

function fail(target, err) {
  target.replaceChildren(el("div", { className: "err", textContent: String(err) }));
}

function warnings(list) {
  return list.map((w) => el("div", { className: "warn", textContent: w }));
}

function table(head, rows) {
  const t = el("table");
  t.append(el("tr", {}, ...head.map((h) => el("th", { textContent: h }))));
  for (const r of rows) {
    t.append(el("tr", {}, ...r.map((c) => (c instanceof Node ? el("td", {}, c) : el("td", { textContent: c })))));
  }
  return t;
}

const fmt = (x) => Number(x).toPrecision(6).replace(/\.?0+$/, "");

function onSample() {
  const out = $("hist");
  try {
    const r = JSON.parse(histogram($("state").value, BigInt($("seed").value || 0), Number($("shots").value)));
    const rows = r.bins.map((b) => {
      const bar = el("div", {}, el("div", { className: "bar" }), el("div", { className: "ideal" }));
      bar.style.width = "18rem";
      bar.children[0].style.width = `${100 * b.frequency}%`;
      bar.children[1].style.width = `${100 * b.probability}%`;
      return [b.label, fmt(b.probability), String(b.count), fmt(b.frequency), bar];
    });
    out.replaceChildren(...warnings(r.warnings), table(["branch", "|c|²", "count", "frequency", ""], rows));
  } catch (e) {
    fail(out, e);
  }
}

function onGrade() {
  const out = $("grades");
  try {
    const r = JSON.parse(grade($("state").value, $("label").value.trim()));
    const rows = r.ordering.classes.map((c, i) => [String(i + 1), fmt(c.probability), c.labels.join(", ")]);
    const summary = [
      `realized ${r.realized}${r.deterministic ? " (deterministic)" : ""}`,
      `possible: ${r.possible.join(", ") || "none"}`,
      `absurd: ${r.absurd.join(", ") || "none"}`,
      r.bounds ? `upper bound: ${r.bounds.upper.join(", ")}; lower bound: ${r.bounds.lower.join(", ")}` : "no bounds: nothing else is possible",
    ].map((s) => el("div", { textContent: s }));
    out.replaceChildren(...warnings(r.warnings), ...summary, table(["rank", "|c|²", "branches"], rows));
  } catch (e) {
    fail(out, e);
  }
}

function onVerify() {
  const out = $("claims");
  try {
    const r = JSON.parse(verify($("carrier").value));
    const rows = r.claims.map((c) => {
      const shown = c.verdict === "fails" ? `fails(${c.counterexample.values.map(fmt).join(", ")})` : c.verdict;
      return [
        c.claim,
        el("span", { className: c.verdict, textContent: shown }),
        c.verdict === "fails" ? c.counterexample.law : "",
        c.note ?? "",
      ];
    });
    out.replaceChildren(
      el("div", { textContent: `carrier: ${r.carrier.map(fmt).join(", ")}` }),
      table(["claim", "verdict", "law", "note"], rows),
    );
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("sample").addEventListener("click", onSample);
$("grade").addEventListener("click", onGrade);
$("verify").addEventListener("click", onVerify);
onSample();
onGrade();
onVerify();
