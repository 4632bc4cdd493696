/** Typed client for the read-only /api endpoints.
 *
 * Every fetch keeps the raw response text next to the parsed value: the
 * explorer displays server payloads verbatim, and tests compare scenes
 * at the byte level (the eps=0 smoothing payload must equal /api/barcode
 * exactly).  No numeric processing happens here beyond JSON.parse.
 */

export interface MetaPayload {
  sizes: number[];
  real_coords: number[][];
  prime: number;
  positive: number;
  negative: number;
  provenance: Record<string, unknown>;
}

export interface BarPayload {
  lo: number[];
  hi: number[];
  sign: number;
  mult: number;
  group?: number;
}

export interface BarcodePayload {
  bars: BarPayload[];
}

export interface ProminencePayload {
  vectors: number[][];
}

export interface RankPayload {
  rank: number;
  witness_bars: number[];
}

export interface OneDBarcode {
  bars: [number, number][];
  signs?: number[];
}

export interface RestrictPayload {
  signed: OneDBarcode;
  cancelled: OneDBarcode;
}

export class SchemaError extends Error {}

export class ServerError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export interface Fetched<T> {
  raw: string;
  data: T;
}

function need(cond: boolean, what: string): asserts cond {
  if (!cond) throw new SchemaError(`payload mismatch: ${what}`);
}

function numberArray(v: unknown, what: string): number[] {
  need(Array.isArray(v) && v.every((x) => typeof x === "number"), what);
  return v as number[];
}

export function parseMeta(obj: unknown): MetaPayload {
  need(typeof obj === "object" && obj !== null, "meta is not an object");
  const o = obj as Record<string, unknown>;
  const sizes = numberArray(o.sizes, "meta.sizes");
  need(Array.isArray(o.real_coords), "meta.real_coords");
  const real_coords = (o.real_coords as unknown[]).map((row, i) =>
    numberArray(row, `meta.real_coords[${i}]`),
  );
  need(typeof o.prime === "number", "meta.prime");
  need(typeof o.positive === "number", "meta.positive");
  need(typeof o.negative === "number", "meta.negative");
  return {
    sizes,
    real_coords,
    prime: o.prime,
    positive: o.positive,
    negative: o.negative,
    provenance: (o.provenance ?? {}) as Record<string, unknown>,
  };
}

export function parseBarcode(obj: unknown): BarcodePayload {
  need(typeof obj === "object" && obj !== null, "barcode is not an object");
  const o = obj as Record<string, unknown>;
  need(Array.isArray(o.bars), "barcode.bars");
  const bars = (o.bars as unknown[]).map((raw, i) => {
    need(typeof raw === "object" && raw !== null, `bars[${i}]`);
    const b = raw as Record<string, unknown>;
    const lo = numberArray(b.lo, `bars[${i}].lo`);
    const hi = numberArray(b.hi, `bars[${i}].hi`);
    need(lo.length === hi.length, `bars[${i}] endpoint lengths`);
    need(b.sign === 1 || b.sign === -1, `bars[${i}].sign`);
    need(typeof b.mult === "number" && b.mult >= 1, `bars[${i}].mult`);
    const out: BarPayload = { lo, hi, sign: b.sign, mult: b.mult };
    if (b.group !== undefined) {
      need(typeof b.group === "number", `bars[${i}].group`);
      out.group = b.group;
    }
    return out;
  });
  return { bars };
}

export function parseProminence(obj: unknown): ProminencePayload {
  need(typeof obj === "object" && obj !== null, "prominence is not an object");
  const o = obj as Record<string, unknown>;
  need(Array.isArray(o.vectors), "prominence.vectors");
  return {
    vectors: (o.vectors as unknown[]).map((row, i) =>
      numberArray(row, `vectors[${i}]`),
    ),
  };
}

export function parseRank(obj: unknown): RankPayload {
  need(typeof obj === "object" && obj !== null, "rank is not an object");
  const o = obj as Record<string, unknown>;
  need(typeof o.rank === "number", "rank.rank");
  return { rank: o.rank, witness_bars: numberArray(o.witness_bars, "rank.witness_bars") };
}

function parseOneD(obj: unknown, what: string): OneDBarcode {
  need(typeof obj === "object" && obj !== null, what);
  const o = obj as Record<string, unknown>;
  need(Array.isArray(o.bars), `${what}.bars`);
  const bars = (o.bars as unknown[]).map((pair, i) => {
    const arr = numberArray(pair, `${what}.bars[${i}]`);
    need(arr.length === 2, `${what}.bars[${i}] length`);
    return [arr[0], arr[1]] as [number, number];
  });
  const out: OneDBarcode = { bars };
  if (o.signs !== undefined) out.signs = numberArray(o.signs, `${what}.signs`);
  return out;
}

export function parseRestrict(obj: unknown): RestrictPayload {
  need(typeof obj === "object" && obj !== null, "restrict is not an object");
  const o = obj as Record<string, unknown>;
  return {
    signed: parseOneD(o.signed, "signed"),
    cancelled: parseOneD(o.cancelled, "cancelled"),
  };
}

async function get<T>(
  base: string,
  path: string,
  parse: (obj: unknown) => T,
  signal?: AbortSignal,
): Promise<Fetched<T>> {
  const resp = await fetch(base + path, { signal });
  const raw = await resp.text();
  if (!resp.ok) {
    let message = `${resp.status}`;
    try {
      const err = JSON.parse(raw) as { error?: string };
      if (typeof err.error === "string") message = err.error;
    } catch {
      /* non-JSON error body: keep the status text */
    }
    throw new ServerError(resp.status, message);
  }
  return { raw, data: parse(JSON.parse(raw)) };
}

/** All endpoints relative to one origin; base is "" in the browser. */
export class ApiClient {
  constructor(readonly base = "") {}

  meta(signal?: AbortSignal) {
    return get(this.base, "/api/meta", parseMeta, signal);
  }

  barcode(signal?: AbortSignal) {
    return get(this.base, "/api/barcode", parseBarcode, signal);
  }

  prominence(signal?: AbortSignal) {
    return get(this.base, "/api/prominence", parseProminence, signal);
  }

  rank(s: number[], t: number[], signal?: AbortSignal) {
    const q = `/api/rank?s=${s.join(",")}&t=${t.join(",")}`;
    return get(this.base, q, parseRank, signal);
  }

  restrict(a: number[], b: number[], signal?: AbortSignal) {
    const q = `/api/restrict?a=${a.join(",")}&b=${b.join(",")}`;
    return get(this.base, q, parseRestrict, signal);
  }

  smooth(eps: number, signal?: AbortSignal) {
    return get(this.base, `/api/smooth?eps=${eps}`, parseBarcode, signal);
  }
}
