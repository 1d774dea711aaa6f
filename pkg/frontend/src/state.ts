/** Editor document state and the interaction logic, kept free of the DOM
 * so it can be driven headlessly against a live service.
 *
 * One document, requests serialised per concern; every async update
 * carries a sequence number and stale responses are discarded.
 */

import { ApiClient, Continuation, ParseErrorObject, ServiceError } from "./api.js";
import { detokenize, isTerminator, tokenize } from "./tokens.js";

export interface EditorSnapshot {
  sentences: string[][];
  current: string[];
  suggestions: Continuation[];
  asp: string;
  cnl: string;
  parseError: ParseErrorObject | null;
  verbalizeError: ParseErrorObject | null;
  roundtrip: "unknown" | "checking" | "equivalent" | "diverged";
  online: boolean;
}

type Listener = (snap: EditorSnapshot) => void;

export class EditorCore {
  private sentences: string[][] = [];
  private current: string[] = [];
  private suggestions: Continuation[] = [];
  private asp = "";
  private parseError: ParseErrorObject | null = null;
  private verbalizeError: ParseErrorObject | null = null;
  private roundtripState: EditorSnapshot["roundtrip"] = "unknown";
  private online = true;
  private listeners: Listener[] = [];
  private seq = { suggest: 0, translate: 0, regenerate: 0, roundtrip: 0 };

  constructor(private api: ApiClient) {}

  onChange(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) {
      fn(snap);
    }
  }

  snapshot(): EditorSnapshot {
    return {
      sentences: this.sentences.map((s) => [...s]),
      current: [...this.current],
      suggestions: this.suggestions,
      asp: this.asp,
      cnl: this.cnlText(),
      parseError: this.parseError,
      verbalizeError: this.verbalizeError,
      roundtrip: this.roundtripState,
      online: this.online,
    };
  }

  cnlText(): string {
    const lines = this.sentences.map(detokenize);
    if (this.current.length > 0) {
      lines.push(detokenize(this.current));
    }
    return lines.join("\n");
  }

  private contextText(): string {
    return this.sentences.map(detokenize).join("\n");
  }

  /** Fetch suggestions for the current sentence prefix. */
  async refreshSuggestions(): Promise<Continuation[]> {
    const my = ++this.seq.suggest;
    try {
      const conts = await this.api.lookahead(this.current, this.contextText());
      this.online = true;
      if (my === this.seq.suggest) {
        this.suggestions = conts;
        this.emit();
      }
      return conts;
    } catch (err) {
      if (err instanceof ServiceError) {
        // the surrounding document does not parse; the parse error pane
        // already says so — there is just nothing to suggest
        if (my === this.seq.suggest) {
          this.suggestions = [];
          this.emit();
        }
        return [];
      }
      this.online = false; // network failure: editing keeps working,
      this.suggestions = []; // suggestions go dark
      this.emit();
      return [];
    }
  }

  /** Append one token; on a sentence terminator the document re-translates. */
  async acceptToken(token: string): Promise<void> {
    this.current.push(token);
    if (isTerminator(token)) {
      this.sentences.push(this.current);
      this.current = [];
      await this.translate();
    }
    await this.refreshSuggestions();
  }

  /** Accept a whole suggested form (possibly several tokens). */
  async acceptForm(form: string[]): Promise<void> {
    for (const tok of form) {
      await this.acceptToken(tok);
    }
  }

  /** Replace the whole CNL document (e.g. pasted text). */
  async setText(text: string): Promise<void> {
    this.sentences = [];
    this.current = [];
    for (const tok of tokenize(text)) {
      this.current.push(tok);
      if (isTerminator(tok)) {
        this.sentences.push(this.current);
        this.current = [];
      }
    }
    await this.translate();
    await this.refreshSuggestions();
  }

  /** POST /parse on the full document; the ASP pane follows the result. */
  async translate(): Promise<void> {
    const my = ++this.seq.translate;
    const text = this.cnlText();
    try {
      const asp = await this.api.parse(text);
      if (my === this.seq.translate) {
        this.asp = asp;
        this.parseError = null;
        this.roundtripState = "unknown";
        this.emit();
      }
    } catch (err) {
      if (err instanceof ServiceError && my === this.seq.translate) {
        this.parseError = err.detail; // anchored by sentence_index
        this.emit();
      } else if (!(err instanceof ServiceError)) {
        this.online = false;
        this.emit();
      }
    }
  }

  /** POST /verbalize on edited ASP; the CNL document follows the result. */
  async regenerate(asp: string): Promise<void> {
    const my = ++this.seq.regenerate;
    try {
      const cnl = await this.api.verbalize(asp);
      if (my !== this.seq.regenerate) {
        return;
      }
      this.asp = asp;
      this.verbalizeError = null;
      this.sentences = [];
      this.current = [];
      for (const line of cnl.split("\n")) {
        const toks = tokenize(line);
        if (toks.length > 0) {
          this.sentences.push(toks);
        }
      }
      this.roundtripState = "unknown";
      this.emit();
      await this.refreshSuggestions();
    } catch (err) {
      if (err instanceof ServiceError && my === this.seq.regenerate) {
        this.verbalizeError = err.detail; // names the offending symbol
        this.emit();
      } else if (!(err instanceof ServiceError)) {
        this.online = false;
        this.emit();
      }
    }
  }

  /** POST /roundtrip on the document; drives the status indicator. */
  async checkRoundtrip(): Promise<void> {
    const my = ++this.seq.roundtrip;
    this.roundtripState = "checking";
    this.emit();
    try {
      const report = await this.api.roundtrip(this.cnlText());
      if (my === this.seq.roundtrip) {
        this.roundtripState = report.equivalent ? "equivalent" : "diverged";
        this.emit();
      }
    } catch {
      if (my === this.seq.roundtrip) {
        this.roundtripState = "unknown";
        this.emit();
      }
    }
  }
}
