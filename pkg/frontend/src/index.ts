export { TrainerClient, asRewardFn } from './client';
export type { ClientConfig, GroupResult, ScoreResult } from './client';
export { HttpTransport, StdioTransport } from './transport';
export type { Transport, Exchange } from './transport';
export { formatNumber, stringify } from './serialize';
export { TransportError, ProtocolError, PreconditionError } from './errors';
