//! Prime and multiplicative-function tables.
//!
//! Tables are built once by a single writer and are immutable afterwards, so
//! they can be shared freely between worker threads.

mod blocks;
mod multiplicative;
mod primes;

pub use blocks::{block_bound, prime_blocks, PrimeBlock};
pub use multiplicative::{
    from_prime_powers, sieve_liouville, sieve_liouville_with, sieve_mobius, sieve_mobius_with,
    MultiplicativeTable, TableValues,
};
pub use primes::{sieve_primes, sieve_primes_with, Budget, PrimeTable};
