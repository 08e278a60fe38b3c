//! CSV writers for layouts, assignments, CDFs, KPI tables, optimizer
//! traces and CRE surfaces.

use std::fmt::Write as _;

use crate::association::{Subframe, UeAssignment};
use crate::channel::{LinkClass, PathLossCdfs};
use crate::deployment::{NetworkLayout, Tier};
use crate::kpi::KpiReport;
use crate::optimizer::{SearchResult, SurfacePoint};

/// `tier,x_m,y_m,z_m` for every node.
pub fn layout_csv(layout: &NetworkLayout) -> String {
    let mut out = String::from("tier,x_m,y_m,z_m\n");
    for tier in Tier::ALL {
        for p in layout.nodes(tier) {
            let _ = writeln!(out, "{},{},{},{}", tier.name(), p.x, p.y, p.z);
        }
    }
    out
}

/// `ue,tier,cell,subframe,sir_db` per assignment; `sir_db` is the serving
/// tier's SIR in the assigned subframe.
pub fn assignments_csv(assignments: &[UeAssignment]) -> String {
    let mut out = String::from("ue,tier,cell,subframe,sir_db\n");
    for a in assignments {
        let sir = match a.subframe {
            Subframe::Usf => a.sir.usf(a.serving_tier),
            Subframe::Csf => a.sir.csf(a.serving_tier),
        };
        let sir_db = if sir > 0.0 {
            10.0 * sir.log10()
        } else {
            f64::NEG_INFINITY
        };
        let _ = writeln!(
            out,
            "{}{},{},{},{},{}",
            a.ue.tier.name(),
            a.ue.index,
            a.serving_tier.name(),
            a.serving_cell,
            a.subframe.name(),
            sir_db
        );
    }
    out
}

/// `link_class,pl_db,cdf`, downsampled to at most `max_points_per_class`
/// rows per class with the exact maximum always kept.
pub fn cdf_csv(cdfs: &PathLossCdfs, max_points_per_class: usize) -> String {
    let mut out = String::from("link_class,pl_db,cdf\n");
    for class in [LinkClass::Gtg, LinkClass::Ata, LinkClass::Atg] {
        for (pl, c) in cdfs.class(class).sampled_points(max_points_per_class) {
            let _ = writeln!(out, "{},{},{}", class.name(), pl, c);
        }
    }
    out
}

/// Flat `trial,kpi,value` table with per-trial rows and `mean` aggregates.
pub fn kpi_csv(report: &KpiReport) -> String {
    let mut out = String::from("trial,kpi,value\n");
    for r in &report.per_trial {
        let _ = writeln!(out, "{},fifth_percentile_se,{}", r.trial, r.fifth_percentile_se);
        let _ = writeln!(out, "{},coverage_probability,{}", r.trial, r.coverage_probability);
    }
    let _ = writeln!(out, "mean,fifth_percentile_se,{}", report.fifth_percentile_se);
    let _ = writeln!(out, "mean,coverage_probability,{}", report.coverage_probability);
    out
}

/// One row per evaluated state with both KPIs.
pub fn trace_csv(result: &SearchResult) -> String {
    let mut out = String::from(
        "alpha,beta,rho_mbs_db,rho_pbs_db,rho_uabs_db,tau_pbs_db,tau_uabs_db,fifth_percentile_se,coverage_probability\n",
    );
    for e in &result.trace {
        let s = &e.state;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.alpha_mbs,
            s.beta_mbs,
            s.rho_mbs_db,
            s.rho_pbs_db,
            s.rho_uabs_db,
            s.tau_pbs_db,
            s.tau_uabs_db,
            e.fifth_percentile_se,
            e.coverage_probability
        );
    }
    out
}

/// `tau_pbs,tau_uabs,coverage,fivepse` rows for the KPI surfaces.
pub fn surface_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("tau_pbs,tau_uabs,coverage,fivepse\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.tau_pbs_db, p.tau_uabs_db, p.coverage_probability, p.fifth_percentile_se
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    #[test]
    fn layout_csv_has_header_and_rows() {
        let layout = NetworkLayout {
            mbs: vec![Point3::new(1.0, 2.0, 36.0)],
            pbs: vec![],
            uabs: vec![Point3::new(3.0, 4.0, 50.0)],
            gue: vec![],
            aue: vec![],
        };
        let csv = layout_csv(&layout);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("tier,x_m,y_m,z_m"));
        assert_eq!(lines.next(), Some("mbs,1,2,36"));
        assert_eq!(lines.next(), Some("uabs,3,4,50"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn surface_csv_shape() {
        let pts = vec![SurfacePoint {
            tau_pbs_db: 3.0,
            tau_uabs_db: 6.0,
            fifth_percentile_se: 0.25,
            coverage_probability: 0.9,
        }];
        let csv = surface_csv(&pts);
        assert_eq!(csv, "tau_pbs,tau_uabs,coverage,fivepse\n3,6,0.9,0.25\n");
    }
}
