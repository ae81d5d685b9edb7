use std::io::{self, Write};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::primes::{base_primes, isqrt, Budget, SEGMENT};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Storage for the values `ν(1..=n_max)`; slot 0 is unused.
#[derive(Debug, Clone, PartialEq)]
pub enum TableValues<T> {
    /// Integer-valued functions such as μ and λ, one byte per entry.
    Signed(Vec<i8>),
    Complex(Vec<Complex<T>>),
}

/// Sieved values of a multiplicative function bounded by one.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeTable<T = f64> {
    n_max: u64,
    label: String,
    values: TableValues<T>,
}

impl<T: Real> MultiplicativeTable<T> {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn storage(&self) -> &TableValues<T> {
        &self.values
    }

    /// `ν(n)` for `1 <= n <= n_max`.
    #[inline]
    pub fn value(&self, n: u64) -> Complex<T> {
        match &self.values {
            TableValues::Signed(v) => Complex::new(T::of_i64(v[n as usize] as i64), T::zero()),
            TableValues::Complex(v) => v[n as usize],
        }
    }

    /// The integer value when the table is integer-valued.
    #[inline]
    pub fn signed(&self, n: u64) -> Option<i8> {
        match &self.values {
            TableValues::Signed(v) => Some(v[n as usize]),
            TableValues::Complex(_) => None,
        }
    }

    /// Fails with a horizon error unless the table reaches `n`.
    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.n_max {
            Err(Error::Horizon {
                label: self.label.clone(),
                needed: n,
                available: self.n_max,
            })
        } else {
            Ok(())
        }
    }

    /// `Σ_{n ≤ upto} ν(n)`, exact for integer-valued tables.
    pub fn partial_sum(&self, upto: u64) -> Complex<T> {
        match &self.values {
            TableValues::Signed(v) => {
                let s: i64 = v[1..=upto as usize].iter().map(|&x| x as i64).sum();
                Complex::new(T::of_i64(s), T::zero())
            }
            TableValues::Complex(v) => crate::summation::pairwise_sum(&v[1..=upto as usize]),
        }
    }

    /// CSV with header `n,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,value")?;
        for n in 1..=self.n_max {
            match &self.values {
                TableValues::Signed(v) => writeln!(w, "{},{}", n, v[n as usize])?,
                TableValues::Complex(v) => {
                    let z = v[n as usize];
                    if z.im.is_zero() {
                        writeln!(w, "{},{}", n, z.re)?
                    } else {
                        writeln!(w, "{},{}", n, z)?
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_table(n_max: u64, bytes_per_entry: u64, budget: &Budget) -> Result<()> {
    if n_max < 1 {
        return Err(Error::Domain("multiplicative tables need n_max >= 1".into()));
    }
    budget.check("multiplicative table", (n_max + 1) * bytes_per_entry + 16 * SEGMENT)
}

/// Segmented sign sieve shared by μ and λ.
///
/// With `liouville` every power `p^k` flips the sign; otherwise only `p`
/// flips and `p²` zeroes the entry.
fn signed_sieve(n_max: u64, liouville: bool) -> Vec<i8> {
    let base = base_primes(isqrt(n_max));
    let mut out = vec![0i8; n_max as usize + 1];
    let mut prod = vec![1u64; SEGMENT as usize];
    let mut lo = 1u64;
    while lo <= n_max {
        let hi = (lo + SEGMENT).min(n_max + 1);
        let width = (hi - lo) as usize;
        let vals = &mut out[lo as usize..hi as usize];
        vals.fill(1);
        prod[..width].fill(1);
        for &p in &base {
            if p >= hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                vals[i] = -vals[i];
                prod[i] *= p;
                m += p;
            }
            let mut pk = p * p;
            while pk < hi {
                let mut m = lo.div_ceil(pk) * pk;
                while m < hi {
                    let i = (m - lo) as usize;
                    if liouville {
                        vals[i] = -vals[i];
                        prod[i] *= p;
                    } else {
                        vals[i] = 0;
                    }
                    m += pk;
                }
                if !liouville {
                    break;
                }
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        for i in 0..width {
            // one prime factor above sqrt(n_max) may remain
            if prod[i] != lo + i as u64 {
                vals[i] = -vals[i];
            }
        }
        lo = hi;
    }
    out
}

/// Möbius function on `[1, n_max]`.
pub fn sieve_mobius<T: Real>(n_max: u64) -> Result<MultiplicativeTable<T>> {
    sieve_mobius_with(n_max, &Budget::default())
}

pub fn sieve_mobius_with<T: Real>(n_max: u64, budget: &Budget) -> Result<MultiplicativeTable<T>> {
    check_table(n_max, 1, budget)?;
    Ok(MultiplicativeTable {
        n_max,
        label: "mobius".into(),
        values: TableValues::Signed(signed_sieve(n_max, false)),
    })
}

/// Liouville function `(-1)^Ω(n)` on `[1, n_max]`.
pub fn sieve_liouville<T: Real>(n_max: u64) -> Result<MultiplicativeTable<T>> {
    sieve_liouville_with(n_max, &Budget::default())
}

pub fn sieve_liouville_with<T: Real>(
    n_max: u64,
    budget: &Budget,
) -> Result<MultiplicativeTable<T>> {
    check_table(n_max, 1, budget)?;
    Ok(MultiplicativeTable {
        n_max,
        label: "liouville".into(),
        values: TableValues::Signed(signed_sieve(n_max, true)),
    })
}

/// Builds a multiplicative function from its values on prime powers with a
/// linear sieve. `at(p, k)` must return `ν(p^k)`; every value is checked
/// against `|ν| ≤ 1`.
pub fn from_prime_powers<T: Real>(
    n_max: u64,
    label: &str,
    budget: &Budget,
    at: impl Fn(u64, u32) -> Complex<T>,
) -> Result<MultiplicativeTable<T>> {
    let entry = std::mem::size_of::<Complex<T>>() as u64 + 13;
    check_table(n_max, entry, budget)?;
    let n = n_max as usize;
    let mut values = vec![Complex::<T>::zero(); n + 1];
    // smallest prime, its full power in n, and that power's exponent
    let mut spf = vec![0u32; n + 1];
    let mut spf_pow = vec![0u64; n + 1];
    let mut spf_exp = vec![0u8; n + 1];
    let mut primes: Vec<u64> = Vec::new();
    values[1] = Complex::one();
    let tol = T::lit(1e-12);
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            spf_pow[i] = i as u64;
            spf_exp[i] = 1;
            values[i] = at(i as u64, 1);
            primes.push(i as u64);
        }
        let si = spf[i] as u64;
        for &p in &primes {
            let m = i as u64 * p;
            if p > si || m > n_max {
                break;
            }
            let m = m as usize;
            spf[m] = p as u32;
            if p == si {
                spf_pow[m] = spf_pow[i] * p;
                spf_exp[m] = spf_exp[i] + 1;
                values[m] = if spf_pow[m] == m as u64 {
                    at(p, spf_exp[m] as u32)
                } else {
                    values[spf_pow[m] as usize] * values[m / spf_pow[m] as usize]
                };
            } else {
                spf_pow[m] = p;
                spf_exp[m] = 1;
                values[m] = values[p as usize] * values[i];
            }
        }
        if values[i].norm() > T::one() + tol {
            return Err(Error::Domain(format!(
                "multiplicative function `{label}` exceeds 1 in modulus at n = {i}"
            )));
        }
    }
    Ok(MultiplicativeTable {
        n_max,
        label: label.to_string(),
        values: TableValues::Complex(values),
    })
}
