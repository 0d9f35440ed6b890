// probe: find the expensive profiles in the deg<=8 / w<=16 sweep
use gfc::invariants::{character_dim_oracle, invariant_dim, Profile};
use std::time::Instant;

fn main() {
    let mut profiles: Vec<Profile> = vec![Profile::empty()];
    fn extend(base: &Profile, from_k: usize, out: &mut Vec<Profile>) {
        for k in from_k..=18 {
            if k == 2 { continue; }
            let mut slots = base.slots().to_vec();
            slots.push(k);
            let q = Profile::new(slots);
            if q.degree() <= 8 && q.weight() <= 16 && q.is_valid() {
                out.push(q.clone());
                extend(&q, k, out);
            }
        }
    }
    extend(&Profile::empty(), 1, &mut profiles);
    eprintln!("total profiles: {}", profiles.len());
    profiles.sort_by_key(|p| std::cmp::Reverse(p.wedge_count()));
    for p in profiles.iter().take(12) {
        let t = Instant::now();
        let a = invariant_dim(p);
        let ta = t.elapsed().as_millis();
        let t = Instant::now();
        let b = character_dim_oracle(p);
        let tb = t.elapsed().as_millis();
        eprintln!("{p} count={} inv={a} ({ta}ms) char={b} ({tb}ms)", p.wedge_count());
        assert_eq!(a, b);
    }
}
