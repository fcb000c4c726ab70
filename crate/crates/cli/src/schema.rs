//! Settings accepted by each subcommand.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Count,
    Seed,
    Floats,
    Counts,
    Vec3,
    Choice(&'static [&'static str]),
    /// Comma-separated `key=value` entries; may be given more than once.
    Pairs,
    Path,
}

impl Kind {
    pub fn expected(self) -> &'static str {
        match self {
            Kind::Float => "a number",
            Kind::Count => "a non-negative integer",
            Kind::Seed => "an unsigned 64-bit integer",
            Kind::Floats => "a comma-separated list of numbers",
            Kind::Counts => "a comma-separated list of non-negative integers",
            Kind::Vec3 => "three comma-separated numbers",
            Kind::Choice(_) => "one of the listed choices",
            Kind::Pairs => "comma-separated key=value entries",
            Kind::Path => "a path",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub required: bool,
    pub help: &'static str,
}

const fn opt(key: &'static str, kind: Kind, help: &'static str) -> Param {
    Param {
        key,
        kind,
        default: None,
        required: false,
        help,
    }
}

const fn def(key: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Param {
    Param {
        key,
        kind,
        default: Some(default),
        required: false,
        help,
    }
}

const fn req(key: &'static str, kind: Kind, help: &'static str) -> Param {
    Param {
        key,
        kind,
        default: None,
        required: true,
        help,
    }
}

pub struct Subcommand {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [Param],
    /// At least one key of each group must be set; the first names the error.
    pub one_of: &'static [&'static [&'static str]],
}

impl Subcommand {
    pub fn param(&self, key: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.key == key)
    }
}

pub const CONVENTIONS: &[&str] = &["canonical", "phased+", "phased-"];
pub const GEOMETRIES: &[&str] = &["hemisphere", "arc"];
pub const TARGETS: &[&str] = &["classical_energy", "quantum_energy", "farfield_power", "biphoton", "wavepacket"];
pub const PARAMETERS: &[&str] = &["phase_delta", "spacing", "wavelength", "source_count"];

pub const GLOBAL: &[Param] = &[
    def("seed", Kind::Seed, "0", "seed for randomized phases and positions"),
    opt("output", Kind::Path, "output file (standard output when absent)"),
    def("format", Kind::Choice(&["csv", "json"]), "csv", "output format"),
    opt("samples", Kind::Count, "detector samples per angular axis"),
    def("n_max", Kind::Count, "32", "Fock-space truncation per mode"),
    def("energy_scale", Kind::Float, "1", "multiplier applied to energies and powers on output"),
];

pub const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "classical",
        about: "Classical interference energy of phased plane waves in a box",
        params: &[
            opt("n_waves", Kind::Count, "number of waves (phases k*delta_phi)"),
            opt("phases", Kind::Floats, "explicit phase list, overrides n_waves"),
            def("delta_phi", Kind::Float, "0", "phase step between consecutive waves"),
            def("k", Kind::Vec3, "0,0,1", "wave vector"),
            def("amplitude", Kind::Float, "1", "real wave amplitude"),
            def("box", Kind::Vec3, "1,1,1", "box edge lengths"),
            opt("grid", Kind::Count, "also integrate the field energy on this many points per axis"),
        ],
        one_of: &[&["n_waves", "phases"]],
    },
    Subcommand {
        name: "quantum",
        about: "Single-mode quantum interference energy on a truncated Fock space",
        params: &[
            opt("n_waves", Kind::Count, "number of phase labels (phases k*delta_phi)"),
            opt("phases", Kind::Floats, "explicit phase list, overrides n_waves"),
            def("delta_phi", Kind::Float, "0", "phase step between consecutive labels"),
            opt("n", Kind::Count, "photon number of the Fock state"),
            opt("alpha", Kind::Floats, "coherent amplitude as re,im (instead of n)"),
            def("omega", Kind::Float, "1", "mode frequency"),
            def("convention", Kind::Choice(CONVENTIONS), "canonical", "commutator convention"),
        ],
        one_of: &[&["n_waves", "phases"], &["n", "alpha"]],
    },
    Subcommand {
        name: "overlap",
        about: "Exchange overlap integral of two plane-wave modes over a box",
        params: &[
            req("dk", Kind::Vec3, "wave-vector difference k2 - k1"),
            req("box", Kind::Vec3, "box edge lengths"),
            def("center", Kind::Vec3, "0,0,0", "box center"),
            def("k1", Kind::Vec3, "0,0,1", "wave vector of the first mode"),
            def("phi1", Kind::Float, "0", "phase of the first mode"),
            def("phi2", Kind::Float, "0", "phase of the second mode"),
        ],
        one_of: &[],
    },
    Subcommand {
        name: "biphoton",
        about: "Two-source single-photon energy versus phase difference and overlap",
        params: &[
            def("delta_phi", Kind::Float, "0", "phase difference phi1 - phi2"),
            def("overlap", Kind::Float, "1", "real part of the mode overlap"),
            def("overlap_im", Kind::Float, "0", "imaginary part of the mode overlap"),
            def("omega", Kind::Float, "1", "mode frequency"),
        ],
        one_of: &[],
    },
    Subcommand {
        name: "wavepacket",
        about: "Classical energy of a collinear wavepacket",
        params: &[
            req("k", Kind::Floats, "component wavenumbers"),
            opt("amplitudes", Kind::Floats, "component amplitudes (default 1 each)"),
            opt("phases", Kind::Floats, "component phases (default 0 each)"),
            def("direction", Kind::Vec3, "0,0,1", "propagation direction"),
            def("box", Kind::Vec3, "1,1,1", "box edge lengths"),
        ],
        one_of: &[],
    },
    Subcommand {
        name: "sweep",
        about: "Sweep one parameter of a target quantity",
        params: &[
            req("target", Kind::Choice(TARGETS), "quantity to evaluate"),
            req("parameter", Kind::Choice(PARAMETERS), "swept parameter"),
            req("start", Kind::Float, "first parameter value"),
            req("stop", Kind::Float, "last parameter value"),
            req("steps", Kind::Count, "number of sweep points"),
            def("fixed", Kind::Pairs, "", "fixed settings of the target, key=value"),
        ],
        one_of: &[],
    },
    Subcommand {
        name: "dicke",
        about: "Fit the growth exponent of the coherent energy with the number of emitters",
        params: &[
            req("n_values", Kind::Counts, "emitter counts"),
            def("regime", Kind::Choice(&["closed_form", "farfield"]), "closed_form", "energy model"),
            def("ratio", Kind::Float, "0.01", "spacing over wavelength (farfield)"),
            def("jitter", Kind::Float, "0", "position jitter as a fraction of the spacing (farfield)"),
            def("geometry", Kind::Choice(GEOMETRIES), "arc", "detector geometry (farfield)"),
        ],
        one_of: &[],
    },
    Subcommand {
        name: "spectrum",
        about: "Far-field transmission spectrum of a linear source array",
        params: &[
            req("sources", Kind::Count, "number of sources"),
            req("spacing", Kind::Float, "source spacing"),
            req("lambda_min", Kind::Float, "shortest wavelength"),
            req("lambda_max", Kind::Float, "longest wavelength"),
            def("steps", Kind::Count, "200", "number of wavelengths"),
            def("phase_step", Kind::Float, "0", "phase increment between neighbouring sources"),
            def("geometry", Kind::Choice(GEOMETRIES), "hemisphere", "detector geometry"),
            opt("radius", Kind::Float, "detector radius (default 1000 x max(extent, lambda_max))"),
        ],
        one_of: &[],
    },
];

pub fn subcommand(name: &str) -> Option<&'static Subcommand> {
    SUBCOMMANDS.iter().find(|s| s.name == name)
}

pub fn global(key: &str) -> Option<&'static Param> {
    GLOBAL.iter().find(|p| p.key == key)
}

pub fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

/// Config files and flags may spell keys with `-` or `_`.
pub fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}
