use std::time::Instant;
use tkz::problems::{blur_instance, gen_video_like, BlurSpec};
use tkz::sampling::StrategyKind;
use tkz::solvers::{run_solver, SolverConfig, SolverKind, Truncation};

fn main() {
    let t0 = Instant::now();
    let truth = gen_video_like(32, 32, 8, 42);
    let spec = BlurSpec { l: 32, n: 8, band: 6, sigma: 1.8 };
    let inst = blur_instance(&spec, &truth, 1e-12).unwrap();
    println!("instance built in {:.2}s", t0.elapsed().as_secs_f64());
    for (kind, tau) in [(SolverKind::Gs, 5), (SolverKind::Tk, 1), (SolverKind::Takshbm, 1)] {
        let t1 = Instant::now();
        let mut cfg = SolverConfig::new(StrategyKind::So, Truncation::Finite(tau), 9);
        cfg.max_epochs = 4000;
        cfg.tol_rse = Some(5e-3);
        cfg.block_size = 15;
        let run = run_solver(&inst, &cfg, kind).unwrap();
        println!("{:?}: full iterations {:.2} rse {:.3e} stop {:?} wall {:.2}s", kind, run.full_iterations, run.final_rse().unwrap(), run.stop, t1.elapsed().as_secs_f64());
    }
}
