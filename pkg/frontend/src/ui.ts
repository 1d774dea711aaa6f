/** DOM wiring: two panes (CNL left, ASP right), a suggestion strip under
 * the CNL pane, and a round-trip status light. */

import { EditorCore, EditorSnapshot } from "./state.js";
import { admits } from "./tokens.js";

export function mount(core: EditorCore, root: HTMLElement): void {
  root.innerHTML = `
    <div class="panes">
      <section class="pane">
        <h2>Specification</h2>
        <pre id="cnl" class="doc"></pre>
        <div id="offline" class="banner" hidden>service unreachable — suggestions disabled</div>
        <div id="suggestions" class="suggestions"></div>
        <div class="manual">
          <input id="token-input" placeholder="type a token" />
          <button id="token-add">add</button>
        </div>
        <div id="parse-error" class="error" hidden></div>
      </section>
      <section class="pane">
        <h2>Answer set program
          <span id="rt" class="rt" title="round-trip status">●</span>
        </h2>
        <textarea id="asp" class="doc" spellcheck="false"></textarea>
        <button id="regen">regenerate specification</button>
        <div id="verb-error" class="error" hidden></div>
      </section>
    </div>`;

  const cnlPane = root.querySelector("#cnl") as HTMLPreElement;
  const aspPane = root.querySelector("#asp") as HTMLTextAreaElement;
  const suggestBox = root.querySelector("#suggestions") as HTMLDivElement;
  const offline = root.querySelector("#offline") as HTMLDivElement;
  const parseErr = root.querySelector("#parse-error") as HTMLDivElement;
  const verbErr = root.querySelector("#verb-error") as HTMLDivElement;
  const rt = root.querySelector("#rt") as HTMLSpanElement;
  const tokenInput = root.querySelector("#token-input") as HTMLInputElement;

  function renderSuggestions(snap: EditorSnapshot): void {
    suggestBox.replaceChildren();
    for (const cont of snap.suggestions) {
      const group = document.createElement("div");
      group.className = "group";
      const label = document.createElement("span");
      label.className = "cat";
      label.textContent = cont.category;
      group.appendChild(label);
      for (const form of cont.forms) {
        const btn = document.createElement("button");
        btn.textContent = form.join(" ");
        btn.addEventListener("click", () => {
          void core.acceptForm(form).then(() => core.checkRoundtrip());
        });
        group.appendChild(btn);
      }
      suggestBox.appendChild(group);
    }
  }

  core.onChange((snap) => {
    cnlPane.textContent = snap.cnl;
    if (document.activeElement !== aspPane) {
      aspPane.value = snap.asp;
    }
    offline.hidden = snap.online;
    parseErr.hidden = snap.parseError === null;
    if (snap.parseError) {
      const where = snap.parseError.sentence_index != null
        ? ` (sentence ${snap.parseError.sentence_index + 1})` : "";
      parseErr.textContent = snap.parseError.message + where;
    }
    verbErr.hidden = snap.verbalizeError === null;
    if (snap.verbalizeError) {
      let msg = snap.verbalizeError.message;
      if (snap.verbalizeError.kind === "unknown_symbol") {
        msg += " — modified programs must stick to the lexicon's naming convention";
      }
      verbErr.textContent = msg;
    }
    rt.dataset.state = snap.roundtrip;
    rt.style.color = {
      unknown: "#999", checking: "#c90",
      equivalent: "#2a2", diverged: "#c22",
    }[snap.roundtrip];
    renderSuggestions(snap);
  });

  tokenInput.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") {
      addManualToken();
    }
  });
  (root.querySelector("#token-add") as HTMLButtonElement)
    .addEventListener("click", addManualToken);

  function addManualToken(): void {
    const tok = tokenInput.value.trim();
    if (!tok) {
      return;
    }
    const snap = core.snapshot();
    if (!snap.suggestions.some((c) => admits(c, tok))) {
      tokenInput.classList.add("rejected");
      setTimeout(() => tokenInput.classList.remove("rejected"), 400);
      return;
    }
    tokenInput.value = "";
    void core.acceptToken(tok).then(() => core.checkRoundtrip());
  }

  (root.querySelector("#regen") as HTMLButtonElement).addEventListener(
    "click", () => void core.regenerate(aspPane.value),
  );

  void core.refreshSuggestions();
}
