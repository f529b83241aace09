use num_complex::Complex64;

/// Iterations allowed per eigenvalue before giving up.
const MAX_ITS: usize = 60;

/// Eigenvalues of a real upper Hessenberg matrix (row-major, n×n) by the
/// Francis double-shift QR iteration, with exceptional shifts every ten
/// iterations. Returns `None` if some eigenvalue fails to converge.
pub fn hessenberg_eigenvalues(h: &[f64], n: usize) -> Option<Vec<Complex64>> {
    // 1-based working copy; row and column 0 are unused
    let w = n + 1;
    // two spare slots so a three-wide window may start at the last column
    let mut a = vec![0.0; w * w + 2];
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            a[(i + 1) * w + j + 1] = h[i * n + j];
        }
    }
    let ix = |i: usize, j: usize| i * w + j;
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[ix(i, j)].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a negligible subdiagonal element
            let mut l = nn;
            while l >= 2 {
                let mut s = a[ix(l - 1, l - 1)].abs() + a[ix(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[ix(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[ix(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[ix(nn, nn)];
            if l == nn {
                out[nn] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[ix(nn - 1, nn - 1)];
            let mut ww = a[ix(nn, nn - 1)] * a[ix(nn - 1, nn)];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + ww;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let hi = x + z;
                    let lo = if z != 0.0 { x - ww / z } else { hi };
                    out[nn - 1] = Complex64::new(hi, 0.0);
                    out[nn] = Complex64::new(lo, 0.0);
                } else {
                    out[nn - 1] = Complex64::new(x + p, -z);
                    out[nn] = Complex64::new(x + p, z);
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITS {
                return None;
            }
            if its > 0 && its % 10 == 0 {
                t += x;
                for i in 1..=nn {
                    a[ix(i, i)] -= x;
                }
                let s = a[ix(nn, nn - 1)].abs() + a[ix(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;

            // two consecutive small subdiagonal elements
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[ix(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - ww) / a[ix(m + 1, m)] + a[ix(m, m + 1)];
                q = a[ix(m + 1, m + 1)] - z - rr - ss;
                r = a[ix(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[ix(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[ix(m - 1, m - 1)].abs() + z.abs() + a[ix(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[ix(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[ix(i, i - 3)] = 0.0;
                }
            }
            // double QR step on rows l..nn and columns m..nn
            for k in m..nn {
                if k != m {
                    p = a[ix(k, k - 1)];
                    q = a[ix(k + 1, k - 1)];
                    r = if k != nn - 1 {
                        a[ix(k + 2, k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[ix(k, k - 1)] = -a[ix(k, k - 1)];
                    }
                } else {
                    a[ix(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                let (top, rest) = a[ix(k, 0)..].split_at_mut(w);
                let (mid, low) = rest.split_at_mut(w);
                let rows = top[k..=nn].iter_mut().zip(mid[k..=nn].iter_mut());
                if k != nn - 1 {
                    for ((ak, ak1), ak2) in rows.zip(low[k..=nn].iter_mut()) {
                        let pp = *ak + q * *ak1 + r * *ak2;
                        *ak2 -= pp * z;
                        *ak1 -= pp * y;
                        *ak -= pp * x;
                    }
                } else {
                    for (ak, ak1) in rows {
                        let pp = *ak + q * *ak1;
                        *ak1 -= pp * y;
                        *ak -= pp * x;
                    }
                }
                let mmin = nn.min(k + 3);
                for i in l..=mmin {
                    let row = &mut a[ix(i, k)..ix(i, k) + 3];
                    let mut pp = x * row[0] + y * row[1];
                    if k != nn - 1 {
                        pp += z * row[2];
                        row[2] -= pp * r;
                    }
                    row[1] -= pp * q;
                    row[0] -= pp;
                }
            }
            if l + 1 >= nn {
                break;
            }
        }
    }
    out.remove(0);
    Some(out)
}

/// In-place reduction of a row-major real matrix to upper Hessenberg form
/// by stabilized elementary similarities. The eliminations for one column
/// commute, so all row operations are applied first and the matching column
/// operations are folded into one pass over the rows.
pub fn reduce_to_hessenberg(a: &mut [f64], n: usize) {
    let mut ys = vec![0.0; n];
    for col in 0..n.saturating_sub(2) {
        let t = col + 1;
        let p = (t..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .unwrap_or(t);
        if a[p * n + col] == 0.0 {
            continue;
        }
        if p != t {
            for j in 0..n {
                a.swap(p * n + j, t * n + j);
            }
            for j in 0..n {
                a.swap(j * n + p, j * n + t);
            }
        }
        let pivot = a[t * n + col];
        let mut any = false;
        for i in t + 1..n {
            let y = a[i * n + col] / pivot;
            ys[i] = y;
            if y == 0.0 {
                continue;
            }
            any = true;
            let (head, tail) = a.split_at_mut(i * n);
            let row_t = &head[t * n + col..t * n + n];
            let row_i = &mut tail[col..n];
            for (x, &v) in row_i.iter_mut().zip(row_t) {
                *x -= y * v;
            }
            tail[col] = 0.0;
        }
        if !any {
            continue;
        }
        let y = &ys[t + 1..n];
        for j in 0..n {
            let row = &a[j * n + t + 1..j * n + n];
            let add: f64 = row.iter().zip(y).map(|(v, y)| v * y).sum();
            a[j * n + t] += add;
        }
    }
}
