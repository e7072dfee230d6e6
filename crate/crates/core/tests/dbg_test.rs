use phasestab::instability::{pair_eval_closed, pair_eval_direct};

#[test]
fn dbg_pair() {
    let m = 1usize;
    let mut worst = (0.0f64, 0.0f64);
    for n in (-240_004i64..=240_004).step_by(1) {
        if n.rem_euclid(4) == 0 { continue; }
        let x = n as f64 / 4.0;
        let fd = pair_eval_direct(m, 1.0, x);
        let gd = pair_eval_direct(m, -1.0, x);
        if let Some((fc, gc)) = pair_eval_closed(m, x) {
            for (d, c) in [(fd, fc), (gd, gc)] {
                let scale = d.abs().max(c.abs());
                if scale > 1e-300 {
                    let rel = (d - c).abs() / scale;
                    if rel > worst.0 {
                        worst = (rel, x);
                    }
                }
            }
        }
    }
    println!("worst rel {:e} at x = {}", worst.0, worst.1);
    let x = worst.1;
    println!("f direct {:e} closed {:e}", pair_eval_direct(m, 1.0, x), pair_eval_closed(m, x).unwrap().0);
    println!("g direct {:e} closed {:e}", pair_eval_direct(m, -1.0, x), pair_eval_closed(m, x).unwrap().1);
}
