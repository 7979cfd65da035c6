//! Row reduction over the prime field `F_p`.

fn reduce_rows(rows: &[Vec<i64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let pm = p as i64;
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(pm) as u64).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inverse_mod_prime(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..cols {
                    a[r][c] = (a[r][c] + (p - f) * a[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

fn inverse_mod_prime(x: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rank of an integer matrix reduced mod the prime `p`.
pub fn rank_mod_prime(rows: &[Vec<i64>], p: u64) -> usize {
    reduce_rows(rows, p).1.len()
}

/// Basis of the right kernel `{x : A x ≡ 0 (mod p)}`, entries in `[0, p)`.
pub fn nullspace_mod_prime(rows: &[Vec<i64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let (rref, pivots) = reduce_rows(rows, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rref[r][fc]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(rank_mod_prime(&[vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod_prime(&[vec![2, 0], vec![0, 2]], 2), 0);
        assert_eq!(rank_mod_prime(&[vec![2, 0], vec![0, 2]], 3), 2);
        assert_eq!(rank_mod_prime(&[], 5), 0);
    }

    #[test]
    fn kernels() {
        let a = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let k = nullspace_mod_prime(&a, 3, 2);
        assert_eq!(k, vec![vec![1, 1, 1]]);
        let k = nullspace_mod_prime(&a, 3, 5);
        assert_eq!(k, vec![vec![1, 4, 1]]);
        assert_eq!(nullspace_mod_prime(&[], 2, 3).len(), 2);
    }
}
