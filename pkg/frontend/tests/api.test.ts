import { describe, expect, it } from "vitest";

import { ServiceClient, ServiceError } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  contentType: string | undefined;
  body: unknown;
}

/** Fetch stub that records each request and replays canned responses. */
function recordingFetch(responses: Response[]) {
  const calls: Recorded[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const headers = new Headers(init?.headers);
    calls.push({
      url,
      method: init?.method ?? "GET",
      contentType: headers.get("content-type") ?? undefined,
      body: init?.body,
    });
    const next = responses.shift();
    if (!next) throw new Error("stub ran out of responses");
    return next;
  };
  return { calls, fetchImpl };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ServiceClient", () => {
  it("reads health from /v1/healthz", async () => {
    const { calls, fetchImpl } = recordingFetch([
      jsonResponse({ status: "ok", version: "0.1.0" }),
    ]);
    const client = new ServiceClient("", fetchImpl);
    const info = await client.health();
    expect(info.version).toBe("0.1.0");
    expect(calls[0]).toMatchObject({ url: "/v1/healthz", method: "GET" });
  });

  it("prefixes every path with the base URL", async () => {
    const { calls, fetchImpl } = recordingFetch([
      jsonResponse({ status: "ok", version: "0.1.0" }),
    ]);
    const client = new ServiceClient("http://example.test:9", fetchImpl);
    await client.health();
    expect(calls[0]?.url).toBe("http://example.test:9/v1/healthz");
  });

  it("creates a session and returns its id", async () => {
    const { calls, fetchImpl } = recordingFetch([jsonResponse({ id: "abc" }, 201)]);
    const client = new ServiceClient("", fetchImpl);
    expect(await client.createSession()).toBe("abc");
    expect(calls[0]).toMatchObject({ url: "/v1/sessions", method: "POST" });
  });

  it("posts frames as image/png bytes to the session", async () => {
    const doc = { schema_version: 1, letter: "V" };
    const { calls, fetchImpl } = recordingFetch([jsonResponse(doc)]);
    const client = new ServiceClient("", fetchImpl);
    const bytes = new Uint8Array([137, 80, 78, 71]);
    const result = await client.postFrame("abc", bytes);
    expect(result.letter).toBe("V");
    expect(calls[0]).toMatchObject({
      url: "/v1/sessions/abc/frames",
      method: "POST",
      contentType: "image/png",
    });
    expect(calls[0]?.body).toBe(bytes);
  });

  it("escapes the session id in frame and delete paths", async () => {
    const { calls, fetchImpl } = recordingFetch([
      jsonResponse({}),
      jsonResponse({}),
    ]);
    const client = new ServiceClient("", fetchImpl);
    await client.postFrame("a/b", new Uint8Array([1]));
    await client.endSession("a/b");
    expect(calls[0]?.url).toBe("/v1/sessions/a%2Fb/frames");
    expect(calls[1]?.url).toBe("/v1/sessions/a%2Fb");
  });

  it("sends single frames to /v1/recognize", async () => {
    const { calls, fetchImpl } = recordingFetch([jsonResponse({ letter: "A" })]);
    const client = new ServiceClient("", fetchImpl);
    await client.recognize(new Uint8Array([1, 2]));
    expect(calls[0]).toMatchObject({
      url: "/v1/recognize",
      method: "POST",
      contentType: "image/png",
    });
  });

  it("ends a session with DELETE and returns the final metrics", async () => {
    const metrics = {
      frames_processed: 9,
      recognitions_emitted: 1,
      elapsed_to_first_emit: 3.5,
      a_o: 50.0,
    };
    const { calls, fetchImpl } = recordingFetch([jsonResponse(metrics)]);
    const client = new ServiceClient("", fetchImpl);
    expect(await client.endSession("abc")).toEqual(metrics);
    expect(calls[0]).toMatchObject({ url: "/v1/sessions/abc", method: "DELETE" });
  });

  it("surfaces the service's error message with its status", async () => {
    const { fetchImpl } = recordingFetch([
      jsonResponse({ error: "unsupported content type 'image/gif'" }, 415),
    ]);
    const client = new ServiceClient("", fetchImpl);
    const failure = await client.recognize(new Uint8Array([1])).catch((err) => err);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.status).toBe(415);
    expect(failure.message).toContain("unsupported content type");
  });

  it("falls back to the status text when the error body is not JSON", async () => {
    const { fetchImpl } = recordingFetch([
      new Response("<html>boom</html>", { status: 502, statusText: "Bad Gateway" }),
    ]);
    const client = new ServiceClient("", fetchImpl);
    const failure = await client.health().catch((err) => err);
    expect(failure).toBeInstanceOf(ServiceError);
    expect(failure.status).toBe(502);
    expect(failure.message).toContain("Bad Gateway");
  });
});
