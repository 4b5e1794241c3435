/// Calls `f` on every `k`-subset of `items` in lexicographic order of
/// positions until `f` returns `true`. Returns whether it did.
pub(crate) fn any_subset<F>(items: &[usize], k: usize, mut f: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    let n = items.len();
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if f(&buf) {
            return true;
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}
