__version__ = '0.1.0'
__description__ = 'Exact hazard, semi-modularity and TCGR analysis of asynchronous Boolean automata'
__url__ = 'https://github.com/innodatalabs/gatedelay'
__author__ = 'Mike Kroutikov'
__author_email__ = 'mkroutikov@innodata.com'
__keywords__ = ['asynchronous circuits', 'hazards', 'semi-modularity', 'model checking']
