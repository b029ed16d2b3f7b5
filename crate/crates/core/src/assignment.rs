//! Linear assignment and small transportation problems.
//!
//! Three assignment solvers share one contract (minimize the total cost of a
//! one-to-one assignment of every row to a distinct column, rows ≤ columns):
//! exhaustive search for tiny problems, the O(n³) Hungarian method for
//! rectangular problems, and Jonker–Volgenant for large square problems.
//! Costs are supplied as a closure so large problems need no matrix.

use num_complex::Complex64;

/// Minimum-cost assignment of `rows` rows into `cols ≥ rows` columns.
/// Returns the column of each row and the total cost.
pub fn solve<F: Fn(usize, usize) -> f64>(rows: usize, cols: usize, cost: F) -> (Vec<usize>, f64) {
    assert!(rows <= cols, "assignment needs rows <= cols");
    if rows == 0 {
        return (Vec::new(), 0.0);
    }
    if cols <= 8 {
        exhaustive(rows, cols, cost)
    } else if rows == cols && rows > 64 {
        lapjv(rows, cost)
    } else {
        hungarian(rows, cols, cost)
    }
}

/// Tries every injection of rows into columns. Intended for `cols ≤ 8`.
pub fn exhaustive<F: Fn(usize, usize) -> f64>(rows: usize, cols: usize, cost: F) -> (Vec<usize>, f64) {
    assert!(rows <= cols);
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(usize, usize) -> f64>(
        row: usize,
        rows: usize,
        cols: usize,
        cost: &F,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        acc: f64,
        best: &mut (Vec<usize>, f64),
    ) {
        if acc >= best.1 {
            return;
        }
        if row == rows {
            *best = (cur.clone(), acc);
            return;
        }
        for j in 0..cols {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(row + 1, rows, cols, cost, used, cur, acc + cost(row, j), best);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (Vec::new(), f64::INFINITY);
    let mut used = vec![false; cols];
    rec(0, rows, cols, &cost, &mut used, &mut Vec::with_capacity(rows), 0.0, &mut best);
    best
}

/// Hungarian method with row potentials, O(rows² · cols).
pub fn hungarian<F: Fn(usize, usize) -> f64>(rows: usize, cols: usize, cost: F) -> (Vec<usize>, f64) {
    assert!(rows <= cols);
    // 1-based with a virtual column 0
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut p = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=cols {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; rows];
    for j in 1..=cols {
        if p[j] != 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    let total = assign.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
    (assign, total)
}

/// Jonker–Volgenant shortest augmenting path for square problems, after
/// column reduction and two rounds of augmenting row reduction.
#[allow(clippy::needless_range_loop, clippy::mut_range_bound)]
pub fn lapjv<F: Fn(usize, usize) -> f64>(n: usize, cost: F) -> (Vec<usize>, f64) {
    const NONE: usize = usize::MAX;
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut rowsol = vec![NONE; n];
    let mut colsol = vec![NONE; n];
    let mut v = vec![0.0f64; n];
    let mut matches = vec![0u32; n];

    // column reduction
    for j in (0..n).rev() {
        let mut imin = 0;
        let mut min = cost(0, j);
        for i in 1..n {
            let c = cost(i, j);
            if c < min {
                min = c;
                imin = i;
            }
        }
        v[j] = min;
        matches[imin] += 1;
        // a row claimed by several columns keeps the first; the rest stay free
        if matches[imin] == 1 {
            rowsol[imin] = j;
            colsol[j] = imin;
        }
    }

    // reduction transfer
    let mut free = Vec::with_capacity(n);
    for i in 0..n {
        if matches[i] == 0 {
            free.push(i);
        } else if matches[i] == 1 {
            let j1 = rowsol[i];
            let mut min = f64::INFINITY;
            for j in 0..n {
                if j != j1 {
                    min = min.min(cost(i, j) - v[j]);
                }
            }
            if min.is_finite() {
                v[j1] -= min;
            }
        }
    }

    // augmenting row reduction
    for _ in 0..2 {
        let pending = std::mem::take(&mut free);
        let mut queue: std::collections::VecDeque<usize> = pending.into();
        let mut budget = 8 * n + 16;
        while let Some(i) = queue.pop_front() {
            if budget == 0 {
                free.push(i);
                free.extend(queue.drain(..));
                break;
            }
            budget -= 1;
            let mut umin = cost(i, 0) - v[0];
            let mut j1 = 0;
            let mut usubmin = f64::INFINITY;
            let mut j2 = NONE;
            for j in 1..n {
                let h = cost(i, j) - v[j];
                if h < usubmin {
                    if h >= umin {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            let mut i0 = colsol[j1];
            let strict = umin < usubmin;
            if strict {
                v[j1] -= usubmin - umin;
            } else if i0 != NONE && j2 != NONE {
                j1 = j2;
                i0 = colsol[j2];
            }
            if i0 != NONE {
                rowsol[i0] = NONE;
            }
            rowsol[i] = j1;
            colsol[j1] = i;
            if i0 != NONE {
                if strict {
                    queue.push_front(i0);
                } else {
                    free.push(i0);
                }
            }
        }
    }

    // shortest augmenting paths for the remaining free rows
    let mut d = vec![0.0f64; n];
    let mut pred = vec![0usize; n];
    let mut collist: Vec<usize> = (0..n).collect();
    for &freerow in &free {
        for j in 0..n {
            d[j] = cost(freerow, j) - v[j];
            pred[j] = freerow;
            collist[j] = j;
        }
        let mut low = 0;
        let mut up = 0;
        let mut last = 0;
        let mut min = 0.0;
        let endofpath;
        'search: loop {
            if up == low {
                last = low;
                min = d[collist[up]];
                up += 1;
                for k in up..n {
                    let j = collist[k];
                    let h = d[j];
                    if h <= min {
                        if h < min {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                }
                for &j in &collist[low..up] {
                    if colsol[j] == NONE {
                        endofpath = j;
                        break 'search;
                    }
                }
            }
            let j1 = collist[low];
            low += 1;
            let i = colsol[j1];
            let h = cost(i, j1) - v[j1] - min;
            let mut k = up;
            while k < n {
                let j = collist[k];
                let v2 = cost(i, j) - v[j] - h;
                if v2 < d[j] {
                    pred[j] = i;
                    if v2 == min {
                        if colsol[j] == NONE {
                            endofpath = j;
                            break 'search;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                    d[j] = v2;
                }
                k += 1;
            }
        }
        // columns scanned before the final level get their prices raised
        for &j in &collist[..last] {
            v[j] += d[j] - min;
        }
        let mut j = endofpath;
        loop {
            let i = pred[j];
            colsol[j] = i;
            let next = rowsol[i];
            rowsol[i] = j;
            if i == freerow {
                break;
            }
            j = next;
        }
    }
    let total = rowsol.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
    (rowsol, total)
}

/// Minimum-cost transport between uniform measures on `na` and `nb` atoms
/// (masses `1/na` and `1/nb`). Successive shortest paths on the dense
/// bipartite graph with integer supplies `nb` and demands `na`.
pub fn uniform_transport<F: Fn(usize, usize) -> f64>(na: usize, nb: usize, cost: F) -> f64 {
    if na == 0 || nb == 0 {
        return 0.0;
    }
    if na == nb {
        return solve(na, nb, &cost).1 / na as f64;
    }
    let c = |i: usize, j: usize| cost(i, j);
    let mut supply = vec![nb as u64; na];
    let mut demand = vec![na as u64; nb];
    let mut flow = vec![0u64; na * nb];
    let mut pot_a = vec![0.0f64; na];
    let mut pot_b = vec![0.0f64; nb];
    let mut total = 0.0;
    loop {
        // Dijkstra from all sources with remaining supply over reduced costs
        // a -> b (always open), b -> a (when flow > 0)
        let mut dist_a = vec![f64::INFINITY; na];
        let mut dist_b = vec![f64::INFINITY; nb];
        let mut prev_b = vec![usize::MAX; nb];
        let mut prev_a = vec![usize::MAX; na];
        let mut done_a = vec![false; na];
        let mut done_b = vec![false; nb];
        for i in 0..na {
            if supply[i] > 0 {
                dist_a[i] = 0.0;
            }
        }
        loop {
            let mut best = f64::INFINITY;
            let mut pick = None;
            for i in 0..na {
                if !done_a[i] && dist_a[i] < best {
                    best = dist_a[i];
                    pick = Some((true, i));
                }
            }
            for j in 0..nb {
                if !done_b[j] && dist_b[j] < best {
                    best = dist_b[j];
                    pick = Some((false, j));
                }
            }
            let Some((is_a, k)) = pick else { break };
            if is_a {
                done_a[k] = true;
                for j in (0..nb).filter(|&j| !done_b[j]) {
                    // reduced costs are nonnegative up to rounding
                    let nd = best + (c(k, j) + pot_a[k] - pot_b[j]).max(0.0);
                    if nd < dist_b[j] {
                        dist_b[j] = nd;
                        prev_b[j] = k;
                    }
                }
            } else {
                done_b[k] = true;
                // sources sit at distance zero and keep no predecessor
                for i in (0..na).filter(|&i| !done_a[i] && supply[i] == 0) {
                    if flow[i * nb + k] > 0 {
                        let nd = best + (pot_b[k] - c(i, k) - pot_a[i]).max(0.0);
                        if nd < dist_a[i] {
                            dist_a[i] = nd;
                            prev_a[i] = k;
                        }
                    }
                }
            }
        }
        let target = (0..nb)
            .filter(|&j| demand[j] > 0 && dist_b[j].is_finite())
            .min_by(|&x, &y| dist_b[x].total_cmp(&dist_b[y]));
        let Some(t) = target else { break };
        for i in 0..na {
            if dist_a[i].is_finite() {
                pot_a[i] += dist_a[i];
            }
        }
        for j in 0..nb {
            if dist_b[j].is_finite() {
                pot_b[j] += dist_b[j];
            }
        }
        // bottleneck along the path t <- a <- b <- ... <- source
        let mut amount = demand[t];
        let mut j = t;
        loop {
            let i = prev_b[j];
            if prev_a[i] == usize::MAX {
                amount = amount.min(supply[i]);
                break;
            }
            let jb = prev_a[i];
            amount = amount.min(flow[i * nb + jb]);
            j = jb;
        }
        let mut j = t;
        demand[t] -= amount;
        loop {
            let i = prev_b[j];
            flow[i * nb + j] += amount;
            total += amount as f64 * c(i, j);
            if prev_a[i] == usize::MAX {
                supply[i] -= amount;
                break;
            }
            let jb = prev_a[i];
            flow[i * nb + jb] -= amount;
            total -= amount as f64 * c(i, jb);
            j = jb;
        }
    }
    total / (na as f64 * nb as f64)
}

/// Largest pair distance in a minimum-total-distance perfect matching of two
/// point sets; infinite when their sizes differ.
pub fn matched_max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (assign, _) = solve(a.len(), b.len(), |i, j| (a[i] - b[j]).norm());
    assign
        .iter()
        .enumerate()
        .map(|(i, &j)| (a[i] - b[j]).norm())
        .fold(0.0, f64::max)
}
