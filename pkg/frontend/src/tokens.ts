/** Client-side mirror of the language's token conventions: words split on
 * whitespace, '.', '?' and ',' stand alone, sentences end at '.' or '?'. */

export function tokenize(text: string): string[] {
  const out: string[] = [];
  for (const m of text.matchAll(/[.?,]|[^\s.?,]+/g)) {
    out.push(m[0]);
  }
  return out;
}

export function isTerminator(tok: string): boolean {
  return tok === "." || tok === "?";
}

const NO_SPACE_BEFORE = new Set([".", "?", ","]);

export function detokenize(tokens: string[]): string {
  let line = "";
  for (const tok of tokens) {
    if (line.length > 0 && !NO_SPACE_BEFORE.has(tok)) {
      line += " ";
    }
    line += tok;
  }
  return line;
}

const NUM_WORDS = new Set([
  "one", "two", "three", "four", "five", "six",
  "seven", "eight", "nine", "ten", "eleven", "twelve",
]);

/** Does a continuation admit this token?  Mirrors the service's contract:
 * open classes (numbers, variable names) admit any member. */
export function admits(cont: { category: string; forms: string[][] },
                       token: string): boolean {
  for (const form of cont.forms) {
    if (form.length > 0 && form[0].toLowerCase() === token.toLowerCase()) {
      return true;
    }
  }
  if (cont.category === "number") {
    return /^\d+$/.test(token) || NUM_WORDS.has(token);
  }
  if (cont.category === "variable") {
    return /^[A-Z]$/.test(token);
  }
  return false;
}
