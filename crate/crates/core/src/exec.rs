//! Worker-pool helpers for sampling sweeps. Tasks are fixed up front and
//! results are reduced in task order, so every aggregate is identical for
//! any thread count (including 1).

/// Worker count: COHOMLAB_THREADS when set, otherwise hardware parallelism.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("COHOMLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Map `f` over the items on the pool, preserving input order.
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let threads = thread_count();
    if threads <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let n = items.len();
    let chunk = n.div_ceil(threads);
    let mut slots: Vec<Option<R>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    let mut item_chunks: Vec<Vec<T>> = Vec::new();
    {
        let mut it = items.into_iter();
        loop {
            let batch: Vec<T> = it.by_ref().take(chunk).collect();
            if batch.is_empty() {
                break;
            }
            item_chunks.push(batch);
        }
    }
    std::thread::scope(|scope| {
        let mut rest: &mut [Option<R>] = &mut slots;
        let mut handles = Vec::new();
        for batch in item_chunks {
            let (head, tail) = rest.split_at_mut(batch.len());
            rest = tail;
            let fref = &f;
            handles.push(scope.spawn(move || {
                for (slot, item) in head.iter_mut().zip(batch) {
                    *slot = Some(fref(item));
                }
            }));
        }
        for h in handles {
            h.join().expect("worker panicked");
        }
    });
    slots.into_iter().map(|s| s.expect("slot filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order() {
        let items: Vec<usize> = (0..1000).collect();
        let out = par_map(items, |i| i * i);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }

    #[test]
    fn thread_count_env_override() {
        // No env mutation here (tests run in parallel); just sanity.
        assert!(thread_count() >= 1);
    }
}
