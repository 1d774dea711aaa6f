/** Typed client for the compiler service. The editor never builds ASP or
 * CNL itself; every transformation goes through these endpoints. */

export interface Continuation {
  category: string;
  forms: string[][];
}

export interface ParseErrorObject {
  kind: string;
  message: string;
  position?: number;
  sentence_index?: number | null;
  expected?: Continuation[];
  symbol?: string;
}

export interface RoundtripReport {
  equivalent: boolean;
  asp: string;
  cnl: string;
  oracle: { ran: boolean; reason: string | null; answer_sets_equal: boolean | null };
}

export class ServiceError extends Error {
  constructor(public detail: ParseErrorObject) {
    super(detail.message);
  }
}

export class ApiClient {
  constructor(private base: string) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const data = await resp.json();
    if (!resp.ok) {
      throw new ServiceError(data as ParseErrorObject);
    }
    return data as T;
  }

  async lookahead(prefix: string[], context: string): Promise<Continuation[]> {
    const data = await this.post<{ continuations: Continuation[] }>(
      "/lookahead", { prefix, context });
    return data.continuations;
  }

  async parse(text: string): Promise<string> {
    const data = await this.post<{ asp: string }>("/parse", { text });
    return data.asp;
  }

  async verbalize(asp: string): Promise<string> {
    const data = await this.post<{ cnl: string }>("/verbalize", { asp });
    return data.cnl;
  }

  async roundtrip(text: string): Promise<RoundtripReport> {
    return this.post<RoundtripReport>("/roundtrip", { text });
  }

  async lexicon(): Promise<unknown> {
    const resp = await fetch(this.base + "/lexicon");
    return resp.json();
  }
}
