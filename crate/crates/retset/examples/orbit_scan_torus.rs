//! The exact symbolic orbit scan on the torus factor: for
//! g = (t+α, t−α, t) over F_25 and the hyperplane x + y = 2z + 2α²,
//! the members of [0, N] are exactly the two-power sums {25^a + 25^b}.
//!
//! The same configuration is available through the files in
//! `examples/data/` and the `retset scan` subcommand:
//!
//! ```bash
//! cargo run --example orbit_scan_torus
//! cargo run --bin retset -- scan \
//!     --group crates/retset/examples/data/torus_alpha.group \
//!     --variety crates/retset/examples/data/torus_alpha.variety \
//!     --window 700 --exact
//! ```

use retset::io::{parse_group_file, parse_variety_file, scan_report_csv};
use retset::scan::{orbit_scan, two_power_sums, ScanMode};

fn main() {
    let group_src = include_str!("data/torus_alpha.group");
    let variety_src = include_str!("data/torus_alpha.variety");
    let (group, point) = parse_group_file(group_src).unwrap();
    let system = parse_variety_file(variety_src).unwrap();

    let window = 700;
    let report = orbit_scan(&group, &point, &system, window, &ScanMode::Exact).unwrap();
    println!("members of [0,{}]: {:?}", window, report.members);
    println!("two-power sums:    {:?}", two_power_sums(25, window));

    // the same scan through five random specializations
    let mc = ScanMode::MonteCarlo { samples: 5, field_degree: 12, seed: 7 };
    let mc_report = orbit_scan(&group, &point, &system, window, &mc).unwrap();
    println!(
        "monte-carlo members agree: {} (max false-accept bound {:e})",
        mc_report.members == report.members,
        mc_report.max_member_error_bound
    );

    // first CSV rows of the exact report
    for line in scan_report_csv(&report).lines().take(4) {
        println!("{}", line);
    }
}
