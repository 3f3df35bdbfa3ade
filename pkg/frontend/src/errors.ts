/**
 * Error hierarchy mirroring the core's failure families.
 *
 * Local validation raises DimensionError / DomainError before the core is
 * ever invoked; errors surfaced by the core carry its exit code (1 usage,
 * 2 I/O or format) and stderr message.
 */

export class SpikekitError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Array shapes or pixel dimensions do not match the operation. */
export class DimensionError extends SpikekitError {}

/** A value is outside its permitted domain (dtype, range, threshold). */
export class DomainError extends SpikekitError {}

/** A serialized container or image violates its format. */
export class FormatError extends SpikekitError {}

/** The core rejected the invocation; carries its exit code and message. */
export class CoreError extends SpikekitError {
  readonly exitCode: number;

  constructor(exitCode: number, message: string) {
    super(message);
    this.exitCode = exitCode;
  }
}

/** Core exit code 1: bad flags or arguments. */
export class CoreUsageError extends CoreError {
  constructor(message: string) {
    super(1, message);
  }
}

/** Core exit code 2: I/O or format failure. */
export class CoreIoError extends CoreError {
  constructor(message: string) {
    super(2, message);
  }
}
