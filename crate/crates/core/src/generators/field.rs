//! Small finite fields GF(p^m) as polynomials over GF(p).

/// Elements are encoded as integers whose base-`p` digits are the
/// polynomial coefficients, lowest degree first.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: usize,
    m: usize,
    order: usize,
    mul_table: Vec<usize>,
    add_table: Vec<usize>,
}

/// Monic irreducible polynomials, coefficients lowest degree first
/// (leading 1 omitted).
fn modulus(p: usize, m: usize) -> Option<Vec<usize>> {
    Some(match (p, m) {
        (_, 1) => vec![],
        (2, 2) => vec![1, 1],       // x^2 + x + 1
        (2, 3) => vec![1, 1, 0],    // x^3 + x + 1
        (2, 4) => vec![1, 1, 0, 0], // x^4 + x + 1
        (3, 2) => vec![1, 0],       // x^2 + 1
        _ => return None,
    })
}

/// `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let (mut r, mut m) = (q, 0);
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

impl FiniteField {
    pub fn new(q: usize) -> Option<Self> {
        let (p, m) = prime_power(q)?;
        let modulus = modulus(p, m)?;
        let digits = |x: usize| -> Vec<usize> {
            let mut d = vec![0; m];
            let mut x = x;
            for c in d.iter_mut() {
                *c = x % p;
                x /= p;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add_table = vec![0; q * q];
        let mut mul_table = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add_table[a * q + b] = encode(&sum);
                let mut prod = vec![0; 2 * m];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce using x^m = -(modulus)
                for deg in (m..2 * m).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, &mc) in modulus.iter().enumerate() {
                        let idx = deg - m + i;
                        prod[idx] = (prod[idx] + (p - c) * mc) % p;
                    }
                }
                mul_table[a * q + b] = encode(&prod[..m]);
            }
        }
        Some(FiniteField {
            p,
            m,
            order: q,
            mul_table,
            add_table,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn characteristic(&self) -> (usize, usize) {
        (self.p, self.m)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add_table[a * self.order + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.order + b]
    }
}
