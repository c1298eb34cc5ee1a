/** Network-level failure after all configured retries were spent. */
export class TransportError extends Error {
  constructor(message: string, readonly cause?: unknown) {
    super(message);
    this.name = 'TransportError';
  }
}

/** The service answered, but not with the expected payload shape. */
export class ProtocolError extends Error {
  constructor(message: string, readonly raw?: string) {
    super(message);
    this.name = 'ProtocolError';
  }
}

/** A call violated the client's own preconditions; nothing was sent. */
export class PreconditionError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'PreconditionError';
  }
}
