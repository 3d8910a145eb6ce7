//! Bundled material data and named presets.
//!
//! Diagonal metal spectra are synthetic but anchored to published fits:
//! the Drude parameters for gold follow Lambrecht and Reynaud,
//! Eur. Phys. J. D 8, 309 (2000), and those for iron follow Ordal et al.,
//! Appl. Opt. 24, 4493 (1985). The bundled tables add smooth interband
//! bands on top of the Drude loss so the composite models have structure
//! above the far infrared. The gyrotropic iron table is shaped after the
//! sign structure of measured polar Kerr spectra of iron.
//!
//! Two-oscillator constants for the birefringent crystals are the fits
//! collected by Munday et al., Phys. Rev. A 71, 042102 (2005), converted
//! to eV.

use crate::dielectric::{
    composite_metal_model, DielectricModel, DrudeParams, OpticalDataTable, TableKind,
    TwoOscillatorParams,
};
use crate::reflection::{MagnetizationOrientation, MirrorSpec, UniaxialGeometry};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("unknown preset `{name}`; available: {available}")]
    UnknownPreset { name: String, available: &'static str },
}

pub const AU_DRUDE: DrudeParams = DrudeParams {
    plasma_frequency: 9.0,
    relaxation_rate: 0.035,
};

pub const FE_DRUDE: DrudeParams = DrudeParams {
    plasma_frequency: 3.54,
    relaxation_rate: 0.019,
};

pub const QUARTZ_ORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 1.920,
    c_uv: 1.359,
    w_ir: 0.137_763_762_6,
    w_uv: 13.374_866_96,
};

pub const QUARTZ_EXTRAORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 1.960,
    c_uv: 1.377,
    w_ir: 0.137_763_762_6,
    w_uv: 13.322_210_01,
};

pub const CALCITE_ORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 5.300,
    c_uv: 1.683,
    w_ir: 0.177_124_837_6,
    w_uv: 10.926_318_48,
};

pub const CALCITE_EXTRAORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 6.300,
    c_uv: 1.182,
    w_ir: 0.177_124_837_6,
    w_uv: 14.046_243_16,
};

pub const BATIO3_ORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 3595.0,
    c_uv: 4.128,
    w_ir: 0.055_948_016_34,
    w_uv: 5.535_562_558,
};

pub const BATIO3_EXTRAORDINARY: TwoOscillatorParams = TwoOscillatorParams {
    c_ir: 145.0,
    c_uv: 4.064,
    w_ir: 0.051_867_102_2,
    w_uv: 5.897_579_134,
};

const AU_XX_CSV: &str = include_str!("../data/au_eps_xx.csv");
const FE_XX_CSV: &str = include_str!("../data/fe_eps_xx.csv");
const FE_XY_CSV: &str = include_str!("../data/fe_eps_xy.csv");

const TABLE_NAMES: &str = "au-xx, fe-xx, fe-xy";
const MODEL_NAMES: &str =
    "au, au-drude, fe, fe-drude, fe-xy, quartz-o, quartz-e, calcite-o, calcite-e, batio3-o, batio3-e";
const MIRROR_NAMES: &str = "ideal, au, au-drude, fe, fe-drude, quartz, calcite, batio3";

/// One of the loss tables shipped with the crate: `au-xx`, `fe-xx`, `fe-xy`.
pub fn bundled_table(name: &str) -> Result<OpticalDataTable, MaterialError> {
    let (text, kind) = match name {
        "au-xx" => (AU_XX_CSV, TableKind::Diagonal),
        "fe-xx" => (FE_XX_CSV, TableKind::Diagonal),
        "fe-xy" => (FE_XY_CSV, TableKind::OffDiagonal),
        _ => {
            return Err(MaterialError::UnknownPreset {
                name: name.into(),
                available: TABLE_NAMES,
            })
        }
    };
    Ok(OpticalDataTable::parse_csv(text, kind).expect("bundled tables are valid"))
}

fn cached(cell: &OnceLock<DielectricModel>, build: impl FnOnce() -> DielectricModel) -> DielectricModel {
    cell.get_or_init(build).clone()
}

/// A named permittivity model. Metals come in a tabulated composite
/// flavor (`au`, `fe`) and a pure Drude flavor (`au-drude`, `fe-drude`);
/// `fe-xy` is the gyrotropic off-diagonal entry; crystal axes use the
/// `-o`/`-e` suffix.
pub fn preset_model(name: &str) -> Result<DielectricModel, MaterialError> {
    static AU: OnceLock<DielectricModel> = OnceLock::new();
    static FE: OnceLock<DielectricModel> = OnceLock::new();
    static FE_XY: OnceLock<DielectricModel> = OnceLock::new();
    match name {
        "au" => Ok(cached(&AU, || {
            composite_metal_model(bundled_table("au-xx").unwrap(), AU_DRUDE)
                .expect("bundled gold table is diagonal")
        })),
        "fe" => Ok(cached(&FE, || {
            composite_metal_model(bundled_table("fe-xx").unwrap(), FE_DRUDE)
                .expect("bundled iron table is diagonal")
        })),
        "fe-xy" => Ok(cached(&FE_XY, || {
            DielectricModel::table(bundled_table("fe-xy").unwrap())
        })),
        "au-drude" => Ok(DielectricModel::Drude(AU_DRUDE)),
        "fe-drude" => Ok(DielectricModel::Drude(FE_DRUDE)),
        "quartz-o" => Ok(DielectricModel::TwoOscillator(QUARTZ_ORDINARY)),
        "quartz-e" => Ok(DielectricModel::TwoOscillator(QUARTZ_EXTRAORDINARY)),
        "calcite-o" => Ok(DielectricModel::TwoOscillator(CALCITE_ORDINARY)),
        "calcite-e" => Ok(DielectricModel::TwoOscillator(CALCITE_EXTRAORDINARY)),
        "batio3-o" => Ok(DielectricModel::TwoOscillator(BATIO3_ORDINARY)),
        "batio3-e" => Ok(DielectricModel::TwoOscillator(BATIO3_EXTRAORDINARY)),
        _ => Err(MaterialError::UnknownPreset {
            name: name.into(),
            available: MODEL_NAMES,
        }),
    }
}

/// A fully assembled mirror. Ferromagnetic iron defaults to polar
/// magnetization (normal to the surface); uniaxial plates default to the
/// optic axis along the laboratory x direction.
pub fn preset_mirror(name: &str) -> Result<MirrorSpec, MaterialError> {
    let spec = match name {
        "ideal" => MirrorSpec::Ideal,
        "au" => MirrorSpec::IsotropicMetal {
            xx: preset_model("au")?,
        },
        "au-drude" => MirrorSpec::IsotropicMetal {
            xx: preset_model("au-drude")?,
        },
        "fe" => MirrorSpec::Ferromagnet {
            xx: preset_model("fe")?,
            xy: preset_model("fe-xy")?,
            orientation: MagnetizationOrientation::default(),
        },
        "fe-drude" => MirrorSpec::Ferromagnet {
            xx: preset_model("fe-drude")?,
            xy: preset_model("fe-xy")?,
            orientation: MagnetizationOrientation::default(),
        },
        "quartz" => MirrorSpec::UniaxialPlate {
            ordinary: preset_model("quartz-o")?,
            extraordinary: preset_model("quartz-e")?,
            geometry: UniaxialGeometry::default(),
        },
        "calcite" => MirrorSpec::UniaxialPlate {
            ordinary: preset_model("calcite-o")?,
            extraordinary: preset_model("calcite-e")?,
            geometry: UniaxialGeometry::default(),
        },
        "batio3" => MirrorSpec::UniaxialPlate {
            ordinary: preset_model("batio3-o")?,
            extraordinary: preset_model("batio3-e")?,
            geometry: UniaxialGeometry::default(),
        },
        _ => {
            return Err(MaterialError::UnknownPreset {
                name: name.into(),
                available: MIRROR_NAMES,
            })
        }
    };
    Ok(spec)
}

/// Preset listings for diagnostics and command-line help.
pub fn available_mirrors() -> &'static str {
    MIRROR_NAMES
}

pub fn available_models() -> &'static str {
    MODEL_NAMES
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse() {
        for name in ["au-xx", "fe-xx", "fe-xy"] {
            let t = bundled_table(name).unwrap();
            assert!(t.rows().len() >= 200, "{name} too short");
        }
    }

    #[test]
    fn composite_iron_anchors() {
        // Frozen values of the bundled composite iron model; guards the
        // data files and the transform at once. Tolerance 1e-3 relative.
        let fe = preset_model("fe").unwrap();
        for (w, want) in [
            (0.01, 43_227.36),
            (0.5, 61.457),
            (2.0, 11.6976),
            (20.0, 1.64521),
        ] {
            let got = fe.eps_i(w);
            assert!(
                ((got - want) / want).abs() < 1e-3,
                "eps_fe(i{w}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn gyrotropic_iron_anchors() {
        let xy = preset_model("fe-xy").unwrap();
        for (w, want) in [
            (0.01, 1.21174),
            (0.5, 0.70001),
            (2.0, 0.153343),
            (20.0, 9.722e-4),
        ] {
            let got = xy.eps_i(w);
            assert!(
                ((got - want) / want).abs() < 1e-3,
                "eps_xy(i{w}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn unknown_names_error() {
        assert!(preset_model("unobtainium").is_err());
        assert!(preset_mirror("unobtainium").is_err());
        assert!(bundled_table("unobtainium").is_err());
    }
}
